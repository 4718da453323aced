//! Seeded synthetic workload: a service catalog, ground-truth compositions,
//! and an invocation log with composition occurrences planted between noise.
//!
//! Everything is driven by one ChaCha8 stream seeded from the config, threaded
//! through catalog, then compositions, then the log, so a `(config, seed)`
//! pair always yields byte-identical output files. Draw order inside the log
//! is fixed: per session `noise count`, then `gap`; per noise invocation
//! `service`, `operation`; per planted occurrence `composition`; per emitted
//! record `inter-invocation step` (skipped for a session's first record),
//! `response time`, `response size`.

use std::path::{Path, PathBuf};

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::log::{parse_log, serialize_log};
use crate::types::{Invocation, LogRecord, ServiceId, Session};

/// Name of the RNG recorded in every manifest. ChaCha8 is seedable, portable
/// across platforms, and stable across releases of the rand crates we pin.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Inclusive integer range `[lo, hi]`, serialized as a two-element array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusiveRange(pub u64, pub u64);

impl InclusiveRange {
    pub fn lo(&self) -> u64 {
        self.0
    }

    pub fn hi(&self) -> u64 {
        self.1
    }

    fn sample(&self, rng: &mut impl Rng) -> u64 {
        rng.random_range(self.0..=self.1)
    }

    pub fn contains(&self, v: u64) -> bool {
        self.0 <= v && v <= self.1
    }
}

/// Everything the generator needs; `Default` gives the documented workload
/// (100 services, 50 compositions, 1000 sessions). Missing keys in a config
/// file fall back to those defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub n_services: usize,
    pub ops_per_service_range: InclusiveRange,
    pub n_compositions: usize,
    pub composition_length_range: InclusiveRange,
    pub n_sessions: usize,
    pub noise_invocations_per_session_range: InclusiveRange,
    pub plant_gap_range: InclusiveRange,
    pub inter_invocation_ms_range: InclusiveRange,
    pub response_time_ms_range: InclusiveRange,
    pub response_size_bytes_range: InclusiveRange,
    pub session_start_epoch: DateTime<Utc>,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n_services: 100,
            ops_per_service_range: InclusiveRange(2, 15),
            n_compositions: 50,
            composition_length_range: InclusiveRange(2, 6),
            n_sessions: 1000,
            noise_invocations_per_session_range: InclusiveRange(5, 15),
            plant_gap_range: InclusiveRange(2, 10),
            inter_invocation_ms_range: InclusiveRange(10, 2000),
            response_time_ms_range: InclusiveRange(1, 5000),
            response_size_bytes_range: InclusiveRange(64, 65536),
            session_start_epoch: Utc.with_ymd_and_hms(2024, 1, 1, 0, 0, 0).unwrap(),
            seed: 42,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let ranges = [
            ("ops_per_service_range", self.ops_per_service_range),
            (
                "composition_length_range",
                self.composition_length_range,
            ),
            (
                "noise_invocations_per_session_range",
                self.noise_invocations_per_session_range,
            ),
            ("plant_gap_range", self.plant_gap_range),
            ("inter_invocation_ms_range", self.inter_invocation_ms_range),
            ("response_time_ms_range", self.response_time_ms_range),
            ("response_size_bytes_range", self.response_size_bytes_range),
        ];
        for (name, r) in ranges {
            if r.lo() > r.hi() {
                return Err(Error::Config(format!(
                    "{name} is empty: [{}, {}]",
                    r.lo(),
                    r.hi()
                )));
            }
        }
        if self.n_services == 0 {
            return Err(Error::Config("n_services must be at least 1".into()));
        }
        if self.n_compositions == 0 {
            return Err(Error::Config("n_compositions must be at least 1".into()));
        }
        if self.ops_per_service_range.lo() == 0 {
            return Err(Error::Config(
                "ops_per_service_range must start at 1 or higher".into(),
            ));
        }
        if self.composition_length_range.lo() < 2 {
            return Err(Error::Config(
                "composition_length_range must start at 2 or higher".into(),
            ));
        }
        if self.composition_length_range.hi() > self.n_services as u64 {
            return Err(Error::Config(format!(
                "composition_length_range reaches {} but only {} distinct services exist",
                self.composition_length_range.hi(),
                self.n_services
            )));
        }
        if self.noise_invocations_per_session_range.lo() == 0 {
            return Err(Error::Config(
                "noise_invocations_per_session_range must start at 1 or higher".into(),
            ));
        }
        if self.plant_gap_range.lo() == 0 {
            return Err(Error::Config(
                "plant_gap_range must start at 1 or higher".into(),
            ));
        }
        if self.inter_invocation_ms_range.lo() == 0 {
            return Err(Error::Config(
                "inter_invocation_ms_range must start at 1 or higher to keep timestamps strictly increasing"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// One catalog entry: a service and the operations it exposes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogService {
    pub name: ServiceId,
    pub operations: Vec<String>,
}

/// The full service catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub services: Vec<CatalogService>,
}

/// A ground-truth composition: an ordered run of operation invocations over
/// pairwise-distinct services.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Composition {
    pub id: usize,
    pub steps: Vec<Invocation>,
}

impl Composition {
    /// Dotted operation-level labels of the steps, in order.
    pub fn labels(&self) -> Vec<String> {
        self.steps.iter().map(Invocation::label).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CompositionsFile {
    compositions: Vec<Composition>,
}

/// Where one composition occurrence was planted: the session, the composition
/// id, and the 0-based index of its first invocation within that session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantRecord {
    pub session: String,
    pub composition: usize,
    pub start_index: usize,
}

/// Ground-truth sidecar written next to every generated log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: GeneratorConfig,
    pub seed: u64,
    pub rng_algorithm: String,
    pub plants: Vec<PlantRecord>,
}

/// A fully generated dataset, ready to write or mine in place.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub records: Vec<LogRecord>,
    pub catalog: Catalog,
    pub compositions: Vec<Composition>,
    pub manifest: Manifest,
}

impl Dataset {
    /// Convenience view of the log as per-session invocation sequences.
    pub fn sessions(&self) -> Vec<Session> {
        crate::log::sessionize(&self.records)
    }
}

/// Draws the service catalog: services `WS1..WSn`, each with `op1..opk`
/// operations, `k` sampled per service.
pub fn generate_catalog(config: &GeneratorConfig, rng: &mut impl Rng) -> Result<Catalog> {
    config.validate()?;
    let services = (1..=config.n_services)
        .map(|i| {
            let k = config.ops_per_service_range.sample(rng);
            CatalogService {
                name: ServiceId::new(format!("WS{i}")).expect("generated name is valid"),
                operations: (1..=k).map(|j| format!("op{j}")).collect(),
            }
        })
        .collect();
    Ok(Catalog { services })
}

// Pairwise-distinct compositions are found by redrawing collisions. The
// default space is astronomically larger than n_compositions, so a long run
// of consecutive collisions only happens when the space is (nearly)
// exhausted; treat that as the config asking for more compositions than
// exist.
const MAX_CONSECUTIVE_COLLISIONS: usize = 1000;

/// Draws the ground-truth compositions: sampled length, pairwise-distinct
/// services inside each composition, one operation per chosen service, and no
/// duplicate composition overall.
pub fn generate_compositions(
    config: &GeneratorConfig,
    catalog: &Catalog,
    rng: &mut impl Rng,
) -> Result<Vec<Composition>> {
    config.validate()?;
    if catalog.services.len() != config.n_services {
        return Err(Error::Config(format!(
            "catalog has {} services but config expects {}",
            catalog.services.len(),
            config.n_services
        )));
    }
    let mut seen: std::collections::HashSet<Vec<Invocation>> = std::collections::HashSet::new();
    let mut compositions = Vec::with_capacity(config.n_compositions);
    let mut collisions = 0usize;
    while compositions.len() < config.n_compositions {
        let len = config.composition_length_range.sample(rng) as usize;
        let picks = rand::seq::index::sample(rng, config.n_services, len);
        let steps: Vec<Invocation> = picks
            .iter()
            .map(|svc_idx| {
                let svc = &catalog.services[svc_idx];
                let op_idx = rng.random_range(0..svc.operations.len());
                Invocation {
                    service: svc.name.clone(),
                    operation: svc.operations[op_idx].clone(),
                }
            })
            .collect();
        if seen.insert(steps.clone()) {
            compositions.push(Composition {
                id: compositions.len(),
                steps,
            });
            collisions = 0;
        } else {
            collisions += 1;
            if collisions >= MAX_CONSECUTIVE_COLLISIONS {
                return Err(Error::Config(format!(
                    "could not draw {} distinct compositions; the catalog and length range admit too few",
                    config.n_compositions
                )));
            }
        }
    }
    Ok(compositions)
}

/// Emits the invocation log and the plant records describing where each
/// composition occurrence landed.
///
/// Each session draws a noise budget `m` and one gap value `g`; after every
/// `g` noise invocations one uniformly chosen composition is inserted
/// contiguously (the countdown then re-arms to the same `g`), until the noise
/// budget is spent. Planted steps do not consume noise budget.
pub fn generate_log(
    config: &GeneratorConfig,
    catalog: &Catalog,
    compositions: &[Composition],
    rng: &mut impl Rng,
) -> Result<(Vec<LogRecord>, Vec<PlantRecord>)> {
    config.validate()?;
    if compositions.is_empty() {
        return Err(Error::Config(
            "cannot plant occurrences from an empty composition list".into(),
        ));
    }
    let mut records = Vec::new();
    let mut plants = Vec::new();

    for s in 1..=config.n_sessions {
        let session_id = format!("s{s}");
        let session_start = config.session_start_epoch
            + Duration::milliseconds((s as i64 - 1) * 3_600_000);
        let mut ts = session_start;
        let mut emitted = 0usize;

        let emit = |invocation: Invocation,
                        records: &mut Vec<LogRecord>,
                        emitted: &mut usize,
                        ts: &mut DateTime<Utc>,
                        rng: &mut dyn rand::RngCore| {
            if *emitted > 0 {
                let step = rng.random_range(
                    config.inter_invocation_ms_range.lo()
                        ..=config.inter_invocation_ms_range.hi(),
                );
                *ts += Duration::milliseconds(step as i64);
            }
            let response_time_ms = rng.random_range(
                config.response_time_ms_range.lo()..=config.response_time_ms_range.hi(),
            );
            let response_size_bytes = rng.random_range(
                config.response_size_bytes_range.lo()..=config.response_size_bytes_range.hi(),
            );
            records.push(LogRecord {
                session_id: session_id.clone(),
                timestamp: *ts,
                invocation,
                response_time_ms,
                response_size_bytes,
            });
            *emitted += 1;
        };

        let noise_budget = config.noise_invocations_per_session_range.sample(rng);
        let gap = config.plant_gap_range.sample(rng);
        let mut countdown = gap;
        let mut noise_spent = 0u64;
        while noise_spent < noise_budget {
            let svc_idx = rng.random_range(0..config.n_services);
            let svc = &catalog.services[svc_idx];
            let op_idx = rng.random_range(0..svc.operations.len());
            emit(
                Invocation {
                    service: svc.name.clone(),
                    operation: svc.operations[op_idx].clone(),
                },
                &mut records,
                &mut emitted,
                &mut ts,
                rng,
            );
            noise_spent += 1;
            countdown -= 1;
            if countdown == 0 {
                let comp = &compositions[rng.random_range(0..compositions.len())];
                plants.push(PlantRecord {
                    session: session_id.clone(),
                    composition: comp.id,
                    start_index: emitted,
                });
                for step in &comp.steps {
                    emit(step.clone(), &mut records, &mut emitted, &mut ts, rng);
                }
                countdown = gap;
            }
        }
    }
    Ok((records, plants))
}

/// Runs catalog, composition and log generation off one seeded stream and
/// bundles the result with its manifest.
pub fn generate_dataset(config: &GeneratorConfig) -> Result<Dataset> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let catalog = generate_catalog(config, &mut rng)?;
    let compositions = generate_compositions(config, &catalog, &mut rng)?;
    let (records, plants) = generate_log(config, &catalog, &compositions, &mut rng)?;
    Ok(Dataset {
        records,
        catalog,
        compositions,
        manifest: Manifest {
            config: config.clone(),
            seed: config.seed,
            rng_algorithm: RNG_ALGORITHM.to_string(),
            plants,
        },
    })
}

/// File names inside a dataset directory.
pub const LOG_FILE: &str = "log.csv";
pub const CATALOG_FILE: &str = "catalog.json";
pub const COMPOSITIONS_FILE: &str = "compositions.json";
pub const MANIFEST_FILE: &str = "manifest.json";

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::json(path, e))?;
    text.push('\n');
    write_file(path, &text)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path, e))
}

/// Writes `log.csv`, `catalog.json`, `compositions.json` and `manifest.json`
/// into `dir`, creating it if needed.
pub fn write_dataset(dir: &Path, dataset: &Dataset) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_file(&dir.join(LOG_FILE), &serialize_log(&dataset.records))?;
    write_json(&dir.join(CATALOG_FILE), &dataset.catalog)?;
    write_json(
        &dir.join(COMPOSITIONS_FILE),
        &CompositionsFile {
            compositions: dataset.compositions.clone(),
        },
    )?;
    write_json(&dir.join(MANIFEST_FILE), &dataset.manifest)
}

/// Reads and parses a log CSV from disk.
pub fn read_log(path: &Path) -> Result<Vec<LogRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_log(&text)
}

pub fn read_catalog(path: &Path) -> Result<Catalog> {
    read_json(path)
}

pub fn read_compositions(path: &Path) -> Result<Vec<Composition>> {
    let file: CompositionsFile = read_json(path)?;
    Ok(file.compositions)
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    read_json(path)
}

/// The four dataset file paths under one directory.
#[derive(Debug, Clone)]
pub struct DatasetPaths {
    pub log: PathBuf,
    pub catalog: PathBuf,
    pub compositions: PathBuf,
    pub manifest: PathBuf,
}

impl DatasetPaths {
    pub fn in_dir(dir: &Path) -> Self {
        DatasetPaths {
            log: dir.join(LOG_FILE),
            catalog: dir.join(CATALOG_FILE),
            compositions: dir.join(COMPOSITIONS_FILE),
            manifest: dir.join(MANIFEST_FILE),
        }
    }
}
