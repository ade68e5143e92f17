//! Problem files and the batch runner.
//!
//! A problem file is UTF-8 JSON with three top-level fields:
//!
//! * `version` — currently `"1"`;
//! * `entities` — a named map of inputs (states, channels, observables,
//!   sets, dilations, distributions, Fock densities, bosonic observables,
//!   direction samples), each tagged with a `kind` field;
//! * `tasks` — an ordered list of `{op, args, output_name}` records.
//!
//! Tasks run in order. A task that produces a library object (a channel,
//! state, observable, or distribution) stores it under its `output_name`,
//! so later tasks can reference it by name — dilation followed by
//! observable extraction is two chained tasks. The report carries one
//! entry per task with the op name, an inputs digest, and the outputs;
//! wall-clock timing goes to stderr only, keeping reports byte-identical
//! across runs with the same inputs and seed.
//!
//! Failure taxonomy (mapped to process exit codes by the CLI): malformed
//! JSON is a *parse* error (2); an unrecognized version, unknown op,
//! unresolvable reference, or invalid entity is a *validation* error (3);
//! an error while executing a task is a *task* error (4) and carries the
//! partial report accumulated so far.

use std::collections::BTreeMap;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::bosonic::{
    ic_bosonic_verdict, support_probe, BosonicObservable, GridSpec, NoiseProfile, VerdictEvidence,
};
use crate::channels::{
    apply_channel, channel_from_dilation, channel_from_observable, compose, observable_from_channel,
    validate_channel, DilationSpec, GaussianChannel,
};
use crate::fock::{oracle_pushforward_char, oracle_weyl_transform, pure_gaussian_density, FockOperator};
use crate::infocomplete::{
    direction_coverage, gaussian_witness, ic_finite_set, ic_single, reconstruct_gaussian,
    subspace_union_span, DirectionFamily, DirectionSample, ObservableSet, WitnessPair,
};
use crate::observables::{
    classify, decompose_covariant, linear_postprocess, marginal_direction, pushforward, smear,
    validate_observable, GaussianDistribution, GaussianObservable,
};
use crate::report::{digest, float_array, float_value};
use crate::sample::{MomentAccumulator, MvnSampler};
use crate::schema::{
    matrix_to_rows, rows_to_matrix, ChannelDto, DilationDto, DistributionDto, FockOperatorDto,
    ObservableDto, StateDto,
};
use crate::states::{state_validity, weyl_transform, GaussianState};
use crate::{Error, Result};

/// Supported problem-file version strings.
pub const SUPPORTED_VERSIONS: &[&str] = &["1"];

/// The op dispatch table: every task op name paired with the CLI
/// subcommand it belongs to. A subcommand invocation requires at least one
/// task from its op group (the `validate` subcommand is special and needs
/// no tasks).
pub const OP_TABLE: &[(&str, &str)] = &[
    ("validate", "validate"),
    ("classify", "classify"),
    ("smear", "classify"),
    ("postprocess", "classify"),
    ("marginal", "classify"),
    ("ic-single", "ic-single"),
    ("ic-set", "ic-set"),
    ("subspace-span", "ic-set"),
    ("coverage", "coverage"),
    ("witness", "witness"),
    ("dilate", "dilate"),
    ("channel-from-obs", "channel-from-obs"),
    ("obs-from-channel", "obs-from-channel"),
    ("pushforward", "pushforward"),
    ("apply-channel", "pushforward"),
    ("compose", "pushforward"),
    ("sample", "sample"),
    ("reconstruct", "reconstruct"),
    ("decompose-covariant", "decompose-covariant"),
    ("bosonic-probe", "bosonic-probe"),
    ("bosonic-verdict", "bosonic-probe"),
    ("oracle-check", "oracle-check"),
];

/// Noise profile wire form, tagged by `profile`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseDto {
    /// No extra noise.
    Trivial,
    /// Triangular (Fejér) hat of the given half-width per coordinate.
    Fejer {
        /// Support half-width.
        width: f64,
    },
    /// Vanishes on the ball of `radius` around `center`.
    ZeroBall {
        /// Ball center in outcome space.
        center: Vec<f64>,
        /// Ball radius.
        radius: f64,
    },
}

impl NoiseDto {
    fn to_noise(&self) -> NoiseProfile {
        match self {
            NoiseDto::Trivial => NoiseProfile::Trivial,
            NoiseDto::Fejer { width } => NoiseProfile::Fejer { width: *width },
            NoiseDto::ZeroBall { center, radius } => NoiseProfile::ZeroBall {
                center: DVector::from_vec(center.clone()),
                radius: *radius,
            },
        }
    }
}

/// One named input, tagged by `kind`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntityDto {
    /// Gaussian state.
    State(StateDto),
    /// Gaussian channel.
    Channel(ChannelDto),
    /// Gaussian observable given by its full parameter triple.
    Observable(ObservableDto),
    /// Convenience: the covariant phase-space observable `(-Ω, I, 0)`.
    QFunction {
        /// Mode count.
        n_modes: usize,
    },
    /// Convenience: sharp quadrature along `direction`.
    Quadrature {
        /// Phase-space direction, length `2N`.
        direction: Vec<f64>,
    },
    /// Observable set referencing observable entities by name.
    Set {
        /// Names of member observables.
        members: Vec<String>,
    },
    /// Dilation specification.
    Dilation(DilationDto),
    /// Outcome distribution.
    Distribution(DistributionDto),
    /// Truncated-Fock density operator.
    FockDensity(FockOperatorDto),
    /// Bosonic observable: named Gaussian base plus smearing noise.
    BosonicSmeared {
        /// Name of the base observable entity.
        base: String,
        /// Extra noise profile.
        noise: NoiseDto,
    },
    /// Bosonic observable: covariant phase-space observable generated by a
    /// Fock density operator.
    BosonicCovariantFock {
        /// Generating density operator.
        sigma: FockOperatorDto,
    },
    /// Explicit direction sample (vectors are normalized).
    Directions {
        /// Direction vectors, any nonzero length-`2N` rows.
        vectors: Vec<Vec<f64>>,
    },
    /// Rotated-quadrature direction family.
    RotatedFamily {
        /// Angles θ.
        thetas: Vec<f64>,
    },
    /// Squeezed-quadrature direction family.
    SqueezedFamily {
        /// `(θ, r)` parameter pairs.
        pairs: Vec<(f64, f64)>,
    },
}

/// One task record.
#[derive(Debug, Clone, Deserialize)]
pub struct TaskDto {
    /// Op name; must appear in [`OP_TABLE`].
    pub op: String,
    /// Op-specific arguments; entity references are strings.
    #[serde(default)]
    pub args: Map<String, Value>,
    /// Name for the report entry and for any object the task stores.
    pub output_name: String,
}

/// Parsed problem file.
#[derive(Debug, Clone, Deserialize)]
pub struct ProblemFile {
    /// Format version; see [`SUPPORTED_VERSIONS`].
    pub version: String,
    /// Named inputs.
    #[serde(default)]
    pub entities: BTreeMap<String, EntityDto>,
    /// Ordered work list.
    #[serde(default)]
    pub tasks: Vec<TaskDto>,
}

/// Which stage failed, deciding the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunErrorKind {
    /// The file is not valid JSON for the schema. Exit code 2.
    Parse,
    /// The file parsed but fails validation (version, references, entity
    /// invariants, op names). Exit code 3.
    Validation,
    /// A task failed while executing. Exit code 4; a partial report is
    /// attached.
    Task,
}

/// Failure report from loading or running a problem file.
#[derive(Debug)]
pub struct RunError {
    /// Failure stage.
    pub kind: RunErrorKind,
    /// Human-readable cause.
    pub message: String,
    /// Report entries accumulated before a task failure.
    pub partial_report: Option<Value>,
}

impl RunError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            RunErrorKind::Parse => 2,
            RunErrorKind::Validation => 3,
            RunErrorKind::Task => 4,
        }
    }

    fn parse(message: impl Into<String>) -> Self {
        RunError {
            kind: RunErrorKind::Parse,
            message: message.into(),
            partial_report: None,
        }
    }

    fn validation(message: impl Into<String>) -> Self {
        RunError {
            kind: RunErrorKind::Validation,
            message: message.into(),
            partial_report: None,
        }
    }
}

/// Run-wide configuration from the CLI flags.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    /// Seed for all stochastic tasks.
    pub seed: u64,
    /// Numerical tolerance for validity checks and decompositions.
    pub tol: f64,
    /// Fock cutoff for oracle-backed tasks.
    pub cutoff: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            tol: crate::DEFAULT_TOL,
            cutoff: crate::DEFAULT_CUTOFF,
        }
    }
}

/// Parses a problem file from JSON text.
///
/// # Errors
///
/// [`RunErrorKind::Parse`] when the text is not valid JSON for the schema.
pub fn load_problem(text: &str) -> std::result::Result<ProblemFile, RunError> {
    serde_json::from_str(text).map_err(|e| RunError::parse(format!("problem file: {e}")))
}

/// A resolved entity in the runner's workspace.
#[derive(Debug, Clone)]
enum Entity {
    State(GaussianState),
    Channel(GaussianChannel),
    Observable(GaussianObservable),
    Set(ObservableSet),
    Dilation(DilationSpec),
    Distribution(GaussianDistribution),
    Fock(FockOperator),
    Bosonic(BosonicObservable),
    Directions(DirectionSample),
}

impl Entity {
    fn kind(&self) -> &'static str {
        match self {
            Entity::State(_) => "state",
            Entity::Channel(_) => "channel",
            Entity::Observable(_) => "observable",
            Entity::Set(_) => "set",
            Entity::Dilation(_) => "dilation",
            Entity::Distribution(_) => "distribution",
            Entity::Fock(_) => "fock_density",
            Entity::Bosonic(_) => "bosonic",
            Entity::Directions(_) => "directions",
        }
    }
}

struct Workspace {
    entities: BTreeMap<String, Entity>,
    config: RunConfig,
    rng: ChaCha12Rng,
}

impl Workspace {
    fn get(&self, name: &str) -> Result<&Entity> {
        self.entities
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown entity '{name}'")))
    }

    fn observable(&self, name: &str) -> Result<&GaussianObservable> {
        match self.get(name)? {
            Entity::Observable(o) => Ok(o),
            other => Err(Error::InvalidInput(format!(
                "entity '{name}' is a {}, expected an observable",
                other.kind()
            ))),
        }
    }

    fn state(&self, name: &str) -> Result<&GaussianState> {
        match self.get(name)? {
            Entity::State(s) => Ok(s),
            other => Err(Error::InvalidInput(format!(
                "entity '{name}' is a {}, expected a state",
                other.kind()
            ))),
        }
    }

    fn channel(&self, name: &str) -> Result<&GaussianChannel> {
        match self.get(name)? {
            Entity::Channel(c) => Ok(c),
            other => Err(Error::InvalidInput(format!(
                "entity '{name}' is a {}, expected a channel",
                other.kind()
            ))),
        }
    }

    fn set(&self, name: &str) -> Result<&ObservableSet> {
        match self.get(name)? {
            Entity::Set(s) => Ok(s),
            other => Err(Error::InvalidInput(format!(
                "entity '{name}' is a {}, expected a set",
                other.kind()
            ))),
        }
    }

    fn distribution(&self, name: &str) -> Result<&GaussianDistribution> {
        match self.get(name)? {
            Entity::Distribution(d) => Ok(d),
            other => Err(Error::InvalidInput(format!(
                "entity '{name}' is a {}, expected a distribution",
                other.kind()
            ))),
        }
    }

    fn bosonic(&self, name: &str) -> Result<&BosonicObservable> {
        match self.get(name)? {
            Entity::Bosonic(b) => Ok(b),
            other => Err(Error::InvalidInput(format!(
                "entity '{name}' is a {}, expected a bosonic observable",
                other.kind()
            ))),
        }
    }

    fn directions(&self, name: &str) -> Result<&DirectionSample> {
        match self.get(name)? {
            Entity::Directions(d) => Ok(d),
            other => Err(Error::InvalidInput(format!(
                "entity '{name}' is a {}, expected a direction sample",
                other.kind()
            ))),
        }
    }

    fn store(&mut self, name: &str, entity: Entity) -> Result<()> {
        if self.entities.contains_key(name) {
            return Err(Error::InvalidInput(format!(
                "output name '{name}' is already taken"
            )));
        }
        self.entities.insert(name.to_string(), entity);
        Ok(())
    }
}

/// Runs a validated problem file and produces the deterministic report.
///
/// `subcommand` is the CLI entry point: `Some("validate")` skips tasks and
/// reports entity summaries; any other subcommand requires at least one
/// task from its op group in [`OP_TABLE`]; `None` (library use) runs all
/// tasks unconditionally.
///
/// # Errors
///
/// See [`RunErrorKind`] for the failure taxonomy.
pub fn run_problem(
    file: &ProblemFile,
    config: &RunConfig,
    subcommand: Option<&str>,
) -> std::result::Result<Value, RunError> {
    validate_file(file, subcommand)?;
    let mut ws = resolve_entities(file, config)?;

    let mut header = Map::new();
    header.insert("version".into(), Value::String(file.version.clone()));
    header.insert("seed".into(), Value::from(config.seed));
    header.insert("tol".into(), float_value(config.tol));
    header.insert("cutoff".into(), Value::from(config.cutoff as u64));

    if subcommand == Some("validate") {
        let mut entities = Map::new();
        for (name, entity) in &ws.entities {
            entities.insert(
                name.clone(),
                entity_summary(entity, config.tol).map_err(|e| {
                    RunError::validation(format!("entity '{name}': {e}"))
                })?,
            );
        }
        header.insert("entities".into(), Value::Object(entities));
        return Ok(Value::Object(header));
    }

    let mut entries: Vec<Value> = Vec::new();
    for task in &file.tasks {
        let started = Instant::now();
        let inputs_digest = digest(&json!({
            "args": Value::Object(task.args.clone()),
            "cutoff": config.cutoff as u64,
            "op": task.op,
            "seed": config.seed,
            "tol": config.tol,
        }));
        let outcome = execute_op(&task.op, &task.args, &task.output_name, &mut ws);
        let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
        eprintln!(
            "task {} ({}): {:.1} ms",
            task.output_name, task.op, elapsed_ms
        );
        match outcome {
            Ok(outputs) => {
                entries.push(json!({
                    "inputs_digest": inputs_digest,
                    "op": task.op,
                    "output_name": task.output_name,
                    "outputs": outputs,
                }));
            }
            Err(e) => {
                entries.push(json!({
                    "error": e.to_string(),
                    "inputs_digest": inputs_digest,
                    "op": task.op,
                    "output_name": task.output_name,
                }));
                header.insert("tasks".into(), Value::Array(entries));
                return Err(RunError {
                    kind: RunErrorKind::Task,
                    message: format!("task '{}' ({}) failed: {e}", task.output_name, task.op),
                    partial_report: Some(Value::Object(header)),
                });
            }
        }
    }
    header.insert("tasks".into(), Value::Array(entries));
    Ok(Value::Object(header))
}

/// Structural validation: version, op names, reference resolution, unique
/// output names, subcommand/task match.
fn validate_file(
    file: &ProblemFile,
    subcommand: Option<&str>,
) -> std::result::Result<(), RunError> {
    if !SUPPORTED_VERSIONS.contains(&file.version.as_str()) {
        return Err(RunError::validation(format!(
            "unrecognized version '{}'",
            file.version
        )));
    }

    let mut known: std::collections::BTreeSet<String> = file.entities.keys().cloned().collect();
    // Set and smeared-bosonic entities reference other entities by name.
    for (name, entity) in &file.entities {
        let refs: Vec<&String> = match entity {
            EntityDto::Set { members } => members.iter().collect(),
            EntityDto::BosonicSmeared { base, .. } => vec![base],
            _ => Vec::new(),
        };
        for r in refs {
            if !file.entities.contains_key(r) {
                return Err(RunError::validation(format!(
                    "entity '{name}' references undefined entity '{r}'"
                )));
            }
        }
    }

    for task in &file.tasks {
        if !OP_TABLE.iter().any(|(op, _)| *op == task.op) {
            return Err(RunError::validation(format!(
                "unknown op '{}' in task '{}'",
                task.op, task.output_name
            )));
        }
        for r in collect_refs(&task.op, &task.args) {
            if !known.contains(&r) {
                return Err(RunError::validation(format!(
                    "task '{}' references undefined entity '{r}'",
                    task.output_name
                )));
            }
        }
        if !known.insert(task.output_name.clone()) {
            return Err(RunError::validation(format!(
                "output name '{}' is already taken",
                task.output_name
            )));
        }
    }

    if let Some(cmd) = subcommand {
        if cmd != "validate" {
            let group: Vec<&str> = OP_TABLE
                .iter()
                .filter(|(_, sub)| *sub == cmd)
                .map(|(op, _)| *op)
                .collect();
            if group.is_empty() {
                return Err(RunError::validation(format!("unknown subcommand '{cmd}'")));
            }
            let matched = file.tasks.iter().any(|t| group.contains(&t.op.as_str()));
            if !matched {
                return Err(RunError::validation(format!(
                    "no task matches subcommand '{cmd}' (expected one of: {})",
                    group.join(", ")
                )));
            }
        }
    }
    Ok(())
}

/// Entity names referenced by a task's arguments, per op schema.
fn collect_refs(op: &str, args: &Map<String, Value>) -> Vec<String> {
    let keys: &[&str] = match op {
        "validate" => &["target"],
        "classify" | "smear" | "postprocess" | "marginal" | "ic-single" | "channel-from-obs"
        | "decompose-covariant" => &["observable"],
        "ic-set" | "subspace-span" | "witness" => &["set"],
        "coverage" => &["directions"],
        "dilate" => &["dilation"],
        "obs-from-channel" => &["channel"],
        "pushforward" => &["observable", "state"],
        "apply-channel" => &["channel", "state"],
        "compose" => &["outer", "inner"],
        "sample" => &["distribution", "observable", "state"],
        "oracle-check" => &["state", "observable"],
        "bosonic-probe" => &["bosonic"],
        _ => &[],
    };
    let mut refs: Vec<String> = keys
        .iter()
        .filter_map(|k| args.get(*k).and_then(Value::as_str))
        .map(str::to_string)
        .collect();
    if op == "reconstruct" {
        if let Some(Value::Array(list)) = args.get("observations") {
            for item in list {
                for key in ["observable", "distribution"] {
                    if let Some(name) = item.get(key).and_then(Value::as_str) {
                        refs.push(name.to_string());
                    }
                }
            }
        }
    }
    if op == "bosonic-verdict" {
        if let Some(Value::Array(list)) = args.get("observables") {
            for item in list {
                if let Some(name) = item.as_str() {
                    refs.push(name.to_string());
                }
            }
        }
    }
    refs
}

/// Builds the runtime workspace, validating every entity through the
/// library constructors. Two passes: referencing kinds (sets, smeared
/// bosonic observables) resolve after their targets.
fn resolve_entities(
    file: &ProblemFile,
    config: &RunConfig,
) -> std::result::Result<Workspace, RunError> {
    let tol = config.tol;
    let mut ws = Workspace {
        entities: BTreeMap::new(),
        config: *config,
        rng: ChaCha12Rng::seed_from_u64(config.seed),
    };
    let fail = |name: &str, e: Error| RunError::validation(format!("entity '{name}': {e}"));

    for (name, dto) in &file.entities {
        let entity = match dto {
            EntityDto::State(d) => Entity::State(d.to_state(tol).map_err(|e| fail(name, e))?),
            EntityDto::Channel(d) => {
                let ch = d.to_channel(tol).map_err(|e| fail(name, e))?;
                let validity = validate_channel(&ch, tol).map_err(|e| fail(name, e))?;
                if !validity.ok {
                    return Err(fail(name, Error::InvalidChannel {
                        min_eig: validity.min_eig,
                    }));
                }
                Entity::Channel(ch)
            }
            EntityDto::Observable(d) => {
                let obs = d.to_observable(tol).map_err(|e| fail(name, e))?;
                let validity = validate_observable(&obs, tol).map_err(|e| fail(name, e))?;
                if !validity.ok {
                    return Err(fail(name, Error::InvalidObservable {
                        min_eig: validity.min_eig,
                    }));
                }
                Entity::Observable(obs)
            }
            EntityDto::QFunction { n_modes } => Entity::Observable(
                GaussianObservable::q_function(*n_modes).map_err(|e| fail(name, e))?,
            ),
            EntityDto::Quadrature { direction } => Entity::Observable(
                GaussianObservable::quadrature(DVector::from_vec(direction.clone()))
                    .map_err(|e| fail(name, e))?,
            ),
            EntityDto::Dilation(d) => {
                Entity::Dilation(d.to_dilation(tol).map_err(|e| fail(name, e))?)
            }
            EntityDto::Distribution(d) => {
                Entity::Distribution(d.to_distribution(tol).map_err(|e| fail(name, e))?)
            }
            EntityDto::FockDensity(d) => {
                Entity::Fock(d.to_operator().map_err(|e| fail(name, e))?)
            }
            EntityDto::BosonicCovariantFock { sigma } => {
                let op = sigma.to_operator().map_err(|e| fail(name, e))?;
                Entity::Bosonic(
                    BosonicObservable::covariant_fock(op, tol).map_err(|e| fail(name, e))?,
                )
            }
            EntityDto::Directions { vectors } => {
                let vecs = vectors
                    .iter()
                    .map(|v| DVector::from_vec(v.clone()))
                    .collect();
                Entity::Directions(
                    DirectionSample::normalized(vecs).map_err(|e| fail(name, e))?,
                )
            }
            EntityDto::RotatedFamily { thetas } => Entity::Directions(
                family_directions_checked(&DirectionFamily::Rotated(thetas.clone()))
                    .map_err(|e| fail(name, e))?,
            ),
            EntityDto::SqueezedFamily { pairs } => Entity::Directions(
                family_directions_checked(&DirectionFamily::Squeezed(pairs.clone()))
                    .map_err(|e| fail(name, e))?,
            ),
            EntityDto::Set { .. } | EntityDto::BosonicSmeared { .. } => continue,
        };
        ws.entities.insert(name.clone(), entity);
    }

    for (name, dto) in &file.entities {
        match dto {
            EntityDto::Set { members } => {
                let mut obs = Vec::with_capacity(members.len());
                for m in members {
                    obs.push(ws.observable(m).map_err(|e| fail(name, e))?.clone());
                }
                let set = ObservableSet::new(obs, tol).map_err(|e| fail(name, e))?;
                ws.entities.insert(name.clone(), Entity::Set(set));
            }
            EntityDto::BosonicSmeared { base, noise } => {
                let base_obs = ws.observable(base).map_err(|e| fail(name, e))?.clone();
                let bos = BosonicObservable::smeared(&base_obs, noise.to_noise(), tol)
                    .map_err(|e| fail(name, e))?;
                ws.entities.insert(name.clone(), Entity::Bosonic(bos));
            }
            _ => {}
        }
    }
    Ok(ws)
}

fn family_directions_checked(family: &DirectionFamily) -> Result<DirectionSample> {
    crate::infocomplete::family_directions(family)
}

/// Validity/summary record for one entity, used by the `validate`
/// subcommand and op.
fn entity_summary(entity: &Entity, tol: f64) -> Result<Value> {
    Ok(match entity {
        Entity::State(s) => {
            let validity = state_validity(s.m(), s.v(), tol)?;
            json!({
                "kind": "state",
                "min_eig": float_value(validity.min_eig),
                "n_modes": s.n_modes() as u64,
                "ok": validity.ok,
            })
        }
        Entity::Channel(c) => {
            let validity = validate_channel(c, tol)?;
            json!({
                "in_modes": c.in_modes() as u64,
                "kind": "channel",
                "min_eig": float_value(validity.min_eig),
                "ok": validity.ok,
                "out_modes": c.out_modes() as u64,
            })
        }
        Entity::Observable(o) => {
            let validity = validate_observable(o, tol)?;
            json!({
                "kind": "observable",
                "min_eig": float_value(validity.min_eig),
                "n_modes": o.n_modes() as u64,
                "ok": validity.ok,
                "outcome_dim": o.outcome_dim() as u64,
            })
        }
        Entity::Set(s) => json!({
            "kind": "set",
            "members": s.members().len() as u64,
            "n_modes": s.n_modes() as u64,
            "ok": true,
        }),
        Entity::Dilation(d) => json!({
            "kind": "dilation",
            "kept_modes": d.kept_modes() as u64,
            "ok": true,
            "total_modes": d.total_modes() as u64,
        }),
        Entity::Distribution(d) => json!({
            "dim": d.dim() as u64,
            "kind": "distribution",
            "ok": true,
        }),
        Entity::Fock(f) => {
            let validity = f.density_validity(tol)?;
            json!({
                "cutoff": f.cutoff() as u64,
                "kind": "fock_density",
                "min_eig": float_value(validity.min_eig),
                "ok": validity.ok,
            })
        }
        Entity::Bosonic(b) => json!({
            "kind": "bosonic",
            "n_modes": b.n_modes() as u64,
            "ok": true,
            "outcome_dim": b.outcome_dim() as u64,
        }),
        Entity::Directions(d) => json!({
            "count": d.directions().len() as u64,
            "kind": "directions",
            "ok": true,
        }),
    })
}

// ---------------------------------------------------------------------------
// Argument helpers
// ---------------------------------------------------------------------------

fn arg_str<'a>(args: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    args.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::InvalidInput(format!("missing string argument '{key}'")))
}

fn arg_opt_str<'a>(args: &'a Map<String, Value>, key: &str) -> Option<&'a str> {
    args.get(key).and_then(Value::as_str)
}

fn arg_usize_or(args: &Map<String, Value>, key: &str, default: usize) -> Result<usize> {
    match args.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_u64()
            .map(|u| u as usize)
            .ok_or_else(|| Error::InvalidInput(format!("argument '{key}' must be an integer"))),
    }
}

fn arg_f64_or(args: &Map<String, Value>, key: &str, default: f64) -> Result<f64> {
    match args.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_f64()
            .ok_or_else(|| Error::InvalidInput(format!("argument '{key}' must be a number"))),
    }
}

fn arg_rows(args: &Map<String, Value>, key: &str) -> Result<DMatrix<f64>> {
    let value = args
        .get(key)
        .ok_or_else(|| Error::InvalidInput(format!("missing matrix argument '{key}'")))?;
    let rows: Vec<Vec<f64>> = serde_json::from_value(value.clone())
        .map_err(|e| Error::InvalidInput(format!("argument '{key}': {e}")))?;
    rows_to_matrix(&rows)
}

fn arg_vec(args: &Map<String, Value>, key: &str) -> Result<DVector<f64>> {
    let value = args
        .get(key)
        .ok_or_else(|| Error::InvalidInput(format!("missing vector argument '{key}'")))?;
    let v: Vec<f64> = serde_json::from_value(value.clone())
        .map_err(|e| Error::InvalidInput(format!("argument '{key}': {e}")))?;
    Ok(DVector::from_vec(v))
}

fn grid_from_args(args: &Map<String, Value>) -> Result<GridSpec> {
    let default = GridSpec::default_probe();
    let ppa = arg_usize_or(args, "points_per_axis", default.points_per_axis())?;
    let range = arg_f64_or(args, "range", default.range())?;
    GridSpec::new(ppa, range)
}

// ---------------------------------------------------------------------------
// Output builders
// ---------------------------------------------------------------------------

fn value_of<T: serde::Serialize>(dto: &T) -> Value {
    serde_json::to_value(dto).expect("DTO serialization is infallible")
}

fn classification_value(obs: &GaussianObservable, tol: f64) -> Value {
    let class = classify(obs, tol);
    json!({
        "commutative": class.commutative,
        "covariant": class.covariant,
        "ic": class.informationally_complete,
        "sharp": class.sharp,
    })
}

fn witness_value(pair: &WitnessPair) -> Result<Value> {
    // Largest statistic deviation across members, as honest evidence that
    // the two states really are indistinguishable for the set.
    let mut max_dev = 0.0f64;
    for obs in pair.certified_against.members() {
        let a = pushforward(obs, &pair.state_a)?;
        let b = pushforward(obs, &pair.state_b)?;
        max_dev = max_dev.max((&a.mean - &b.mean).abs().max());
        max_dev = max_dev.max(crate::symplectic::max_abs(&(&a.cov - &b.cov)));
    }
    let separation = (pair.state_a.m() - pair.state_b.m()).norm()
        + (pair.state_a.v() - pair.state_b.v()).norm();
    Ok(json!({
        "max_law_deviation": float_value(max_dev),
        "state_a": value_of(&StateDto::from_state(&pair.state_a)),
        "state_b": value_of(&StateDto::from_state(&pair.state_b)),
        "state_separation": float_value(separation),
    }))
}

fn evidence_value(evidence: &VerdictEvidence) -> Value {
    match evidence {
        VerdictEvidence::Coverage {
            nonzero_fraction,
            hole_radius,
        } => json!({
            "hole_radius": float_value(*hole_radius),
            "nonzero_fraction": float_value(*nonzero_fraction),
            "type": "coverage",
        }),
        VerdictEvidence::ZeroHole { center, radius } => json!({
            "center": float_array(center.iter().copied()),
            "radius": float_value(*radius),
            "type": "zero_hole",
        }),
        VerdictEvidence::BoundedSupport { radius } => json!({
            "radius": float_value(*radius),
            "type": "bounded_support",
        }),
        VerdictEvidence::DegenerateDirections => json!({
            "type": "degenerate_directions",
        }),
    }
}

// ---------------------------------------------------------------------------
// Task execution
// ---------------------------------------------------------------------------

/// Executes one op against the workspace, returning its report outputs.
fn execute_op(
    op: &str,
    args: &Map<String, Value>,
    output_name: &str,
    ws: &mut Workspace,
) -> Result<Value> {
    let tol = ws.config.tol;
    match op {
        "validate" => {
            let target = arg_str(args, "target")?;
            let entity = ws.get(target)?.clone();
            entity_summary(&entity, tol)
        }
        "classify" => {
            let obs = ws.observable(arg_str(args, "observable")?)?;
            let validity = validate_observable(obs, tol)?;
            Ok(json!({
                "classification": classification_value(obs, tol),
                "min_eig": float_value(validity.min_eig),
                "ok": validity.ok,
            }))
        }
        "smear" => {
            let obs = ws.observable(arg_str(args, "observable")?)?.clone();
            let c = arg_rows(args, "c")?;
            let d = arg_vec(args, "d")?;
            let out = smear(&obs, &c, &d, tol)?;
            let dto = ObservableDto::from_observable(&out);
            ws.store(output_name, Entity::Observable(out))?;
            Ok(json!({ "observable": value_of(&dto) }))
        }
        "postprocess" => {
            let obs = ws.observable(arg_str(args, "observable")?)?.clone();
            let p = arg_rows(args, "p")?;
            let out = linear_postprocess(&obs, &p)?;
            let dto = ObservableDto::from_observable(&out);
            ws.store(output_name, Entity::Observable(out))?;
            Ok(json!({ "observable": value_of(&dto) }))
        }
        "marginal" => {
            let obs = ws.observable(arg_str(args, "observable")?)?;
            let p_vec = arg_vec(args, "direction")?;
            let p = DMatrix::from_row_slice(1, p_vec.len(), p_vec.as_slice());
            let direction = marginal_direction(obs, &p)?;
            Ok(json!({ "direction": float_array(direction.iter().copied()) }))
        }
        "ic-single" => {
            let obs = ws.observable(arg_str(args, "observable")?)?;
            Ok(json!({
                "ic": ic_single(obs, tol),
                "rank": crate::symplectic::numerical_rank(obs.a0(), tol) as u64,
                "required": 2 * obs.n_modes() as u64,
            }))
        }
        "ic-set" => {
            let set = ws.set(arg_str(args, "set")?)?;
            let ic = ic_finite_set(set, tol);
            let span = subspace_union_span(set, tol);
            let witness = if ic {
                Value::Null
            } else {
                match gaussian_witness(set, tol)? {
                    Some(pair) => witness_value(&pair)?,
                    None => Value::Null,
                }
            };
            Ok(json!({
                "ic": ic,
                "span_dim": span.dimension as u64,
                "witness": witness,
            }))
        }
        "subspace-span" => {
            let set = ws.set(arg_str(args, "set")?)?;
            let span = subspace_union_span(set, tol);
            Ok(json!({
                "basis": value_of(&matrix_to_rows(&span.basis)),
                "dimension": span.dimension as u64,
            }))
        }
        "coverage" => {
            let sample = ws.directions(arg_str(args, "directions")?)?;
            let probes = arg_usize_or(args, "probe_grid_size", 10_000)?;
            let radius = direction_coverage(sample, probes)?;
            Ok(json!({
                "covering_radius": float_value(radius),
                "directions": sample.directions().len() as u64,
                "probe_grid_size": probes as u64,
            }))
        }
        "witness" => {
            let set = ws.set(arg_str(args, "set")?)?;
            match gaussian_witness(set, tol)? {
                Some(pair) => Ok(json!({ "witness": witness_value(&pair)? })),
                None => Ok(json!({ "witness": Value::Null })),
            }
        }
        "dilate" => {
            let spec = match ws.get(arg_str(args, "dilation")?)? {
                Entity::Dilation(d) => d.clone(),
                other => {
                    return Err(Error::InvalidInput(format!(
                        "entity is a {}, expected a dilation",
                        other.kind()
                    )))
                }
            };
            let channel = channel_from_dilation(&spec)?;
            let dto = ChannelDto::from_channel(&channel);
            let validity = validate_channel(&channel, tol)?;
            ws.store(output_name, Entity::Channel(channel))?;
            Ok(json!({
                "channel": value_of(&dto),
                "min_eig": float_value(validity.min_eig),
                "ok": validity.ok,
            }))
        }
        "channel-from-obs" => {
            let obs = ws.observable(arg_str(args, "observable")?)?.clone();
            let channel = channel_from_observable(&obs, tol)?;
            let dto = ChannelDto::from_channel(&channel);
            ws.store(output_name, Entity::Channel(channel))?;
            Ok(json!({ "channel": value_of(&dto) }))
        }
        "obs-from-channel" => {
            let channel = ws.channel(arg_str(args, "channel")?)?.clone();
            let obs = observable_from_channel(&channel);
            let dto = ObservableDto::from_observable(&obs);
            let class = classification_value(&obs, tol);
            ws.store(output_name, Entity::Observable(obs))?;
            Ok(json!({
                "classification": class,
                "observable": value_of(&dto),
            }))
        }
        "pushforward" => {
            let obs = ws.observable(arg_str(args, "observable")?)?;
            let state = ws.state(arg_str(args, "state")?)?;
            let law = pushforward(obs, state)?;
            let dto = DistributionDto::from_distribution(&law);
            ws.store(output_name, Entity::Distribution(law))?;
            Ok(json!({ "distribution": value_of(&dto) }))
        }
        "apply-channel" => {
            let channel = ws.channel(arg_str(args, "channel")?)?.clone();
            let state = ws.state(arg_str(args, "state")?)?.clone();
            let out = apply_channel(&channel, &state)?;
            let dto = StateDto::from_state(&out);
            ws.store(output_name, Entity::State(out))?;
            Ok(json!({ "state": value_of(&dto) }))
        }
        "compose" => {
            let outer = ws.channel(arg_str(args, "outer")?)?.clone();
            let inner = ws.channel(arg_str(args, "inner")?)?.clone();
            let out = compose(&outer, &inner)?;
            let dto = ChannelDto::from_channel(&out);
            ws.store(output_name, Entity::Channel(out))?;
            Ok(json!({ "channel": value_of(&dto) }))
        }
        "sample" => {
            let law = match arg_opt_str(args, "distribution") {
                Some(name) => ws.distribution(name)?.clone(),
                None => {
                    let obs = ws.observable(arg_str(args, "observable")?)?;
                    let state = ws.state(arg_str(args, "state")?)?;
                    pushforward(obs, state)?
                }
            };
            let count = arg_usize_or(args, "count", 10_000)?;
            let sampler = MvnSampler::new(&law)?;
            let mut acc = MomentAccumulator::new(sampler.dim());
            let mut first_draws: Vec<Value> = Vec::new();
            for i in 0..count {
                let x = sampler.sample(&mut ws.rng);
                if i < 10 {
                    first_draws.push(float_array(x.iter().copied()));
                }
                acc.push(&x);
            }
            let empirical = acc.finish()?;
            let dto = DistributionDto::from_distribution(&empirical);
            ws.store(output_name, Entity::Distribution(empirical))?;
            Ok(json!({
                "count": count as u64,
                "empirical": value_of(&dto),
                "first_draws": Value::Array(first_draws),
            }))
        }
        "reconstruct" => {
            let list = args
                .get("observations")
                .and_then(Value::as_array)
                .ok_or_else(|| {
                    Error::InvalidInput("missing list argument 'observations'".into())
                })?;
            let mut observations = Vec::with_capacity(list.len());
            for item in list {
                let obs_name = item.get("observable").and_then(Value::as_str).ok_or_else(
                    || Error::InvalidInput("observation needs an 'observable' name".into()),
                )?;
                let dist_name = item.get("distribution").and_then(Value::as_str).ok_or_else(
                    || Error::InvalidInput("observation needs a 'distribution' name".into()),
                )?;
                observations.push((
                    ws.observable(obs_name)?.clone(),
                    ws.distribution(dist_name)?.clone(),
                ));
            }
            let rec = reconstruct_gaussian(&observations, tol)?;
            let dto = StateDto::from_state(&rec.state);
            let outputs = json!({
                "nullspace_dim": rec.nullspace_dim as u64,
                "rank": rec.rank as u64,
                "residual": float_value(rec.residual),
                "state": value_of(&dto),
                "valid": rec.validity.ok,
            });
            ws.store(output_name, Entity::State(rec.state))?;
            Ok(outputs)
        }
        "decompose-covariant" => {
            let obs = ws.observable(arg_str(args, "observable")?)?;
            let dec = decompose_covariant(obs, tol)?;
            let recomposed = dec.recompose(tol)?;
            let max_err = crate::symplectic::max_abs(&(recomposed.a0() - obs.a0()))
                .max(crate::symplectic::max_abs(&(recomposed.b0() - obs.b0())))
                .max((recomposed.v0() - obs.v0()).abs().max());
            Ok(json!({
                "betas": float_array(dec.betas.iter().copied()),
                "noise_c": value_of(&matrix_to_rows(&dec.noise_c)),
                "noise_d": float_array(dec.noise_d.iter().copied()),
                "postprocess": value_of(&matrix_to_rows(&dec.p)),
                "recompose_max_err": float_value(max_err),
                "symplectic": value_of(&matrix_to_rows(&dec.s)),
            }))
        }
        "bosonic-probe" => {
            let bos = ws.bosonic(arg_str(args, "bosonic")?)?;
            let grid = grid_from_args(args)?;
            let threshold = arg_f64_or(args, "threshold", 1e-8)?;
            let probe = support_probe(bos, &grid, threshold)?;
            Ok(json!({
                "grid_points": probe.points.len() as u64,
                "hole_radius": float_value(probe.hole_radius),
                "max_truncation_weight": float_value(probe.max_truncation_weight),
                "min_abs_point": float_array(probe.min_abs_point.iter().copied()),
                "min_abs_value": float_value(probe.min_abs_value),
                "nonzero_fraction": float_value(probe.nonzero_fraction),
                "spacing": float_value(probe.spacing),
            }))
        }
        "bosonic-verdict" => {
            let names = args
                .get("observables")
                .and_then(Value::as_array)
                .ok_or_else(|| {
                    Error::InvalidInput("missing list argument 'observables'".into())
                })?;
            let mut members = Vec::with_capacity(names.len());
            for n in names {
                let name = n.as_str().ok_or_else(|| {
                    Error::InvalidInput("'observables' entries must be entity names".into())
                })?;
                members.push(ws.bosonic(name)?.clone());
            }
            let grid = grid_from_args(args)?;
            let threshold = arg_f64_or(args, "threshold", 1e-8)?;
            let verdict = ic_bosonic_verdict(&members, &grid, threshold)?;
            Ok(json!({
                "evidence": evidence_value(&verdict.evidence),
                "ic_consistent": verdict.ic_consistent,
            }))
        }
        "oracle-check" => {
            let state = ws.state(arg_str(args, "state")?)?.clone();
            let cutoff = ws.config.cutoff;
            let rho = pure_gaussian_density(&state, cutoff)?;
            let points: Vec<DVector<f64>> = match args.get("points") {
                Some(value) => {
                    let rows: Vec<Vec<f64>> = serde_json::from_value(value.clone())
                        .map_err(|e| Error::InvalidInput(format!("argument 'points': {e}")))?;
                    rows.into_iter().map(DVector::from_vec).collect()
                }
                None => default_check_grid(),
            };
            let mut max_weyl_dev = 0.0f64;
            let mut max_trunc = 0.0f64;
            for x in &points {
                let analytic = weyl_transform(&state, x)?;
                let oracle = oracle_weyl_transform(&rho, x)?;
                max_weyl_dev = max_weyl_dev.max((analytic - oracle.value).norm());
                max_trunc = max_trunc.max(oracle.truncation_weight);
            }
            let mut outputs = Map::new();
            outputs.insert("max_weyl_deviation".into(), float_value(max_weyl_dev));
            outputs.insert("max_truncation_weight".into(), float_value(max_trunc));
            outputs.insert("points_checked".into(), Value::from(points.len() as u64));
            if let Some(obs_name) = arg_opt_str(args, "observable") {
                let obs = ws.observable(obs_name)?;
                let law = pushforward(obs, &state)?;
                let mut max_char_dev = 0.0f64;
                for x in &points {
                    let p = if x.len() == obs.outcome_dim() {
                        x.clone()
                    } else {
                        DVector::from_element(obs.outcome_dim(), x[0])
                    };
                    let oracle = oracle_pushforward_char(obs, &rho, &p)?;
                    let analytic = Complex64::from_polar(
                        (-0.5 * (p.transpose() * &law.cov * &p)[(0, 0)]).exp(),
                        law.mean.dot(&p),
                    );
                    max_char_dev = max_char_dev.max((analytic - oracle.value).norm());
                }
                outputs.insert("max_char_deviation".into(), float_value(max_char_dev));
            }
            Ok(Value::Object(outputs))
        }
        other => Err(Error::InvalidInput(format!("unknown op '{other}'"))),
    }
}

/// Polar grid of Weyl arguments: radii 0.5..2.5 at eight angles, plus the
/// origin — the regime where the default cutoff is trustworthy.
fn default_check_grid() -> Vec<DVector<f64>> {
    let mut points = vec![DVector::zeros(2)];
    for k in 0..5 {
        let r = 0.5 + 0.5 * k as f64;
        for j in 0..8 {
            let t = std::f64::consts::TAU * j as f64 / 8.0;
            points.push(DVector::from_vec(vec![r * t.cos(), r * t.sin()]));
        }
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_function_problem() -> ProblemFile {
        load_problem(
            r#"{
                "version": "1",
                "entities": {
                    "qf": {"kind": "q_function", "n_modes": 1}
                },
                "tasks": [
                    {"op": "classify", "args": {"observable": "qf"}, "output_name": "qf_class"}
                ]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn classify_task_reports_the_covariant_profile() {
        let report = run_problem(&q_function_problem(), &RunConfig::default(), None).unwrap();
        let entry = &report["tasks"][0];
        assert_eq!(entry["op"], "classify");
        let class = &entry["outputs"]["classification"];
        assert_eq!(class["commutative"], Value::Bool(false));
        assert_eq!(class["sharp"], Value::Bool(false));
        assert_eq!(class["covariant"], Value::Bool(true));
        assert_eq!(class["ic"], Value::Bool(true));
        assert_eq!(entry["outputs"]["ok"], Value::Bool(true));
    }

    #[test]
    fn undefined_references_fail_validation() {
        let file = load_problem(
            r#"{
                "version": "1",
                "entities": {},
                "tasks": [
                    {"op": "classify", "args": {"observable": "ghost"}, "output_name": "t"}
                ]
            }"#,
        )
        .unwrap();
        let err = run_problem(&file, &RunConfig::default(), None).unwrap_err();
        assert_eq!(err.kind, RunErrorKind::Validation);
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn version_and_op_names_are_validated() {
        let bad_version = load_problem(r#"{"version": "99", "entities": {}, "tasks": []}"#).unwrap();
        assert_eq!(
            run_problem(&bad_version, &RunConfig::default(), None)
                .unwrap_err()
                .kind,
            RunErrorKind::Validation
        );

        let bad_op = load_problem(
            r#"{
                "version": "1",
                "entities": {"qf": {"kind": "q_function", "n_modes": 1}},
                "tasks": [{"op": "frobnicate", "args": {}, "output_name": "t"}]
            }"#,
        )
        .unwrap();
        assert_eq!(
            run_problem(&bad_op, &RunConfig::default(), None)
                .unwrap_err()
                .kind,
            RunErrorKind::Validation
        );

        assert!(load_problem("{ not json").is_err());
    }

    #[test]
    fn ic_set_on_two_quadratures_reports_a_witness() {
        let file = load_problem(
            r#"{
                "version": "1",
                "entities": {
                    "q0": {"kind": "quadrature", "direction": [0.0, 1.0]},
                    "q90": {"kind": "quadrature", "direction": [-1.0, 0.0]},
                    "pair": {"kind": "set", "members": ["q0", "q90"]}
                },
                "tasks": [
                    {"op": "ic-set", "args": {"set": "pair"}, "output_name": "decision"}
                ]
            }"#,
        )
        .unwrap();
        let report = run_problem(&file, &RunConfig::default(), Some("ic-set")).unwrap();
        let outputs = &report["tasks"][0]["outputs"];
        assert_eq!(outputs["ic"], Value::Bool(false));
        assert_eq!(outputs["span_dim"], Value::from(2u64));
        assert!(outputs["witness"].is_object(), "witness must be present");
        let dev = outputs["witness"]["max_law_deviation"].as_f64().unwrap();
        assert!(dev < 1e-10);
    }

    #[test]
    fn subcommand_must_match_some_task() {
        let err = run_problem(&q_function_problem(), &RunConfig::default(), Some("witness"))
            .unwrap_err();
        assert_eq!(err.kind, RunErrorKind::Validation);
        // The same file under its own subcommand is fine.
        assert!(run_problem(&q_function_problem(), &RunConfig::default(), Some("classify")).is_ok());
    }

    #[test]
    fn chaining_stores_outputs_as_entities() {
        let file = load_problem(
            r#"{
                "version": "1",
                "entities": {
                    "qf": {"kind": "q_function", "n_modes": 1},
                    "vac": {"kind": "state", "n_modes": 1, "m": [0.0, 0.0],
                            "v": [[1.0, 0.0], [0.0, 1.0]]}
                },
                "tasks": [
                    {"op": "channel-from-obs", "args": {"observable": "qf"}, "output_name": "qf_channel"},
                    {"op": "obs-from-channel", "args": {"channel": "qf_channel"}, "output_name": "qf_back"},
                    {"op": "pushforward", "args": {"observable": "qf_back", "state": "vac"}, "output_name": "law"},
                    {"op": "sample", "args": {"distribution": "law", "count": 5000}, "output_name": "draws"},
                    {"op": "reconstruct", "args": {"observations": [
                        {"observable": "qf_back", "distribution": "law"}
                    ]}, "output_name": "estimate"}
                ]
            }"#,
        )
        .unwrap();
        let report = run_problem(&file, &RunConfig::default(), None).unwrap();
        let tasks = report["tasks"].as_array().unwrap();
        assert_eq!(tasks.len(), 5);
        // Extraction returns the Q-function bit-exactly; reconstruction
        // from its exact law recovers the vacuum.
        let est = &tasks[4]["outputs"];
        assert_eq!(est["nullspace_dim"], Value::from(0u64));
        assert_eq!(est["valid"], Value::Bool(true));
        let m = est["state"]["m"].as_array().unwrap();
        assert!(m.iter().all(|x| x.as_f64().unwrap().abs() < 1e-10));
    }

    #[test]
    fn reports_are_deterministic_for_a_fixed_seed() {
        let file = load_problem(
            r#"{
                "version": "1",
                "entities": {
                    "law": {"kind": "distribution", "mean": [0.5, -0.5],
                            "cov": [[2.0, 0.3], [0.3, 1.0]]}
                },
                "tasks": [
                    {"op": "sample", "args": {"distribution": "law", "count": 200}, "output_name": "draws"}
                ]
            }"#,
        )
        .unwrap();
        let config = RunConfig {
            seed: 42,
            ..RunConfig::default()
        };
        let a = crate::report::render_json(&run_problem(&file, &config, None).unwrap());
        let b = crate::report::render_json(&run_problem(&file, &config, None).unwrap());
        assert_eq!(a, b);
        let other = RunConfig {
            seed: 43,
            ..RunConfig::default()
        };
        let c = crate::report::render_json(&run_problem(&file, &other, None).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn task_failures_keep_the_partial_report() {
        let file = load_problem(
            r#"{
                "version": "1",
                "entities": {
                    "qf": {"kind": "q_function", "n_modes": 1},
                    "q0": {"kind": "quadrature", "direction": [0.0, 1.0]}
                },
                "tasks": [
                    {"op": "classify", "args": {"observable": "qf"}, "output_name": "ok_task"},
                    {"op": "decompose-covariant", "args": {"observable": "q0"}, "output_name": "boom"}
                ]
            }"#,
        )
        .unwrap();
        let err = run_problem(&file, &RunConfig::default(), None).unwrap_err();
        assert_eq!(err.kind, RunErrorKind::Task);
        assert_eq!(err.exit_code(), 4);
        let partial = err.partial_report.unwrap();
        let tasks = partial["tasks"].as_array().unwrap();
        assert_eq!(tasks.len(), 2);
        assert!(tasks[0]["outputs"].is_object());
        assert!(tasks[1]["error"].is_string());
    }

    #[test]
    fn validate_subcommand_summarizes_entities() {
        let file = load_problem(
            r#"{
                "version": "1",
                "entities": {
                    "vac": {"kind": "state", "n_modes": 1, "m": [0.0, 0.0],
                            "v": [[1.0, 0.0], [0.0, 1.0]]},
                    "qf": {"kind": "q_function", "n_modes": 1}
                },
                "tasks": []
            }"#,
        )
        .unwrap();
        let report = run_problem(&file, &RunConfig::default(), Some("validate")).unwrap();
        assert_eq!(report["entities"]["vac"]["ok"], Value::Bool(true));
        assert_eq!(report["entities"]["qf"]["kind"], Value::String("observable".into()));
    }

    #[test]
    fn invalid_entities_fail_validation_with_detail() {
        let file = load_problem(
            r#"{
                "version": "1",
                "entities": {
                    "bad": {"kind": "state", "n_modes": 1, "m": [0.0, 0.0],
                            "v": [[0.5, 0.0], [0.0, 0.5]]}
                },
                "tasks": []
            }"#,
        )
        .unwrap();
        let err = run_problem(&file, &RunConfig::default(), None).unwrap_err();
        assert_eq!(err.kind, RunErrorKind::Validation);
        assert!(err.message.contains("bad"));

        // Positivity violations in observable entities are caught at the
        // same stage: (-Ω, 0.99·I, 0) sits just below the boundary.
        let file = load_problem(
            r#"{
                "version": "1",
                "entities": {
                    "shrunk": {"kind": "observable", "n_modes": 1, "outcome_dim": 2,
                               "a0": [[0.0, -1.0], [1.0, 0.0]],
                               "b0": [[0.99, 0.0], [0.0, 0.99]],
                               "v0": [0.0, 0.0]}
                },
                "tasks": []
            }"#,
        )
        .unwrap();
        let err = run_problem(&file, &RunConfig::default(), None).unwrap_err();
        assert_eq!(err.kind, RunErrorKind::Validation);
        assert!(err.message.contains("shrunk"));
    }

    #[test]
    fn every_op_belongs_to_a_subcommand_and_dispatches() {
        // The op table is the single source of truth for dispatch; every
        // op must be executable (not fall through to the unknown-op arm).
        let subcommands = [
            "validate",
            "classify",
            "ic-single",
            "ic-set",
            "coverage",
            "witness",
            "dilate",
            "channel-from-obs",
            "obs-from-channel",
            "pushforward",
            "sample",
            "reconstruct",
            "decompose-covariant",
            "bosonic-probe",
            "oracle-check",
        ];
        for (op, sub) in OP_TABLE {
            assert!(subcommands.contains(sub), "op {op} maps to unknown subcommand {sub}");
        }
        for sub in subcommands {
            assert!(
                OP_TABLE.iter().any(|(_, s)| s == &sub),
                "subcommand {sub} has no ops"
            );
        }
        // Unknown op stays unknown.
        let mut ws = Workspace {
            entities: BTreeMap::new(),
            config: RunConfig::default(),
            rng: ChaCha12Rng::seed_from_u64(0),
        };
        assert!(execute_op("frobnicate", &Map::new(), "x", &mut ws).is_err());
    }

    #[test]
    fn oracle_check_runs_on_pure_states() {
        let file = load_problem(
            r#"{
                "version": "1",
                "entities": {
                    "vac": {"kind": "state", "n_modes": 1, "m": [0.2, -0.3],
                            "v": [[1.0, 0.0], [0.0, 1.0]]},
                    "qf": {"kind": "q_function", "n_modes": 1}
                },
                "tasks": [
                    {"op": "oracle-check",
                     "args": {"state": "vac", "observable": "qf"},
                     "output_name": "check"}
                ]
            }"#,
        )
        .unwrap();
        let config = RunConfig {
            cutoff: 40,
            ..RunConfig::default()
        };
        let report = run_problem(&file, &config, Some("oracle-check")).unwrap();
        let outputs = &report["tasks"][0]["outputs"];
        assert!(outputs["max_weyl_deviation"].as_f64().unwrap() < 1e-6);
        assert!(outputs["max_char_deviation"].as_f64().unwrap() < 1e-6);
    }
}
