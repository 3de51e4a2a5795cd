//! Run configuration: a flat, sectioned key-value text format with
//! rational-string vectors, plus the algebra definition file format and the
//! named initial-data profiles.

use crate::grid::GridField;
use crate::solver::{SchemeChoice, SolverError};
use fvir_core::euler::{build_euler_equation, EulerEquation, InertiaSpec};
use fvir_core::{AlgebraElement, FrobeniusAlgebra, Rat};
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// Parsed sections; every key must be consumed by the command using it.
struct Sections {
    map: BTreeMap<String, BTreeMap<String, String>>,
}

impl Sections {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| err(format!("line {}: malformed section header", lineno + 1)))?;
                current = name.trim().to_string();
                map.entry(current.clone()).or_default();
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| err(format!("line {}: expected `key = value`", lineno + 1)))?;
            if current.is_empty() {
                return Err(err(format!(
                    "line {}: key outside any [section]",
                    lineno + 1
                )));
            }
            let prev = map
                .get_mut(&current)
                .unwrap()
                .insert(k.trim().to_string(), v.trim().to_string());
            if prev.is_some() {
                return Err(err(format!(
                    "line {}: duplicate key `{}`",
                    lineno + 1,
                    k.trim()
                )));
            }
        }
        Ok(Self { map })
    }

    fn take(&mut self, section: &str, key: &str) -> Option<String> {
        self.map.get_mut(section)?.remove(key)
    }

    fn take_required(&mut self, section: &str, key: &str) -> Result<String, ConfigError> {
        self.take(section, key)
            .ok_or_else(|| err(format!("missing `{key}` in [{section}]")))
    }

    fn section_keys(&self, section: &str) -> Vec<String> {
        self.map
            .get(section)
            .map(|s| s.keys().cloned().collect())
            .unwrap_or_default()
    }

    fn finish(&self) -> Result<(), ConfigError> {
        for (sec, keys) in &self.map {
            if let Some(k) = keys.keys().next() {
                return Err(err(format!("unknown key `{k}` in [{sec}]")));
            }
        }
        Ok(())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat, ConfigError> {
    Rat::from_str(s.trim())
        .map_err(|_| err(format!("`{s}` is not a rational (use p/q or integer)")))
}

fn parse_rat_list(s: &str) -> Result<Vec<Rat>, ConfigError> {
    s.split(',').map(parse_rat).collect()
}

/// Numeric entries accept rational strings or floating literals.
fn parse_f64(s: &str) -> Result<f64, ConfigError> {
    let s = s.trim();
    if let Ok(r) = Rat::from_str(s) {
        return r.to_f64().ok_or_else(|| err(format!("`{s}` out of range")));
    }
    s.parse::<f64>()
        .map_err(|_| err(format!("`{s}` is not a number")))
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',').map(parse_f64).collect()
}

fn parse_usize(s: &str) -> Result<usize, ConfigError> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| err(format!("`{s}` is not a nonnegative integer")))
}

/// Split on commas outside parentheses/brackets: `Z2(-1,1), Zl(3,[0,0,1])`
/// has two entries.
fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(core::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

/// One algebra-with-trace choice from a config `spec` entry.
fn parse_algebra_spec(spec: &str, base: &Path) -> Result<FrobeniusAlgebra<Rat>, ConfigError> {
    let s = spec.trim();
    if s == "R" {
        return Ok(FrobeniusAlgebra::reals());
    }
    if let Some(path) = s.strip_prefix("file:") {
        return load_algebra_file(&base.join(path.trim()));
    }
    if let Some(args) = s.strip_prefix("Z2(").and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').collect();
        if parts.len() != 2 {
            return Err(err(format!("`{s}`: expected Z2(eps,k)")));
        }
        let eps = parse_rat(parts[0])?;
        let k = parse_usize(parts[1])?;
        return FrobeniusAlgebra::z2(eps, k).map_err(|e| err(format!("`{s}`: {e}")));
    }
    if let Some(args) = s.strip_prefix("Zl(").and_then(|r| r.strip_suffix(')')) {
        let (l_str, trace_str) = args
            .split_once(',')
            .ok_or_else(|| err(format!("`{s}`: expected Zl(l,top) or Zl(l,[t1,...,tl])")))?;
        let l = parse_usize(l_str)?;
        if l == 0 {
            return Err(err(format!("`{s}`: l must be >= 1")));
        }
        let trace_str = trace_str.trim();
        if trace_str == "top" {
            return FrobeniusAlgebra::zl_top(l).map_err(|e| err(format!("`{s}`: {e}")));
        }
        let inner = trace_str
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| err(format!("`{s}`: trace must be `top` or `[t1,...,tl]`")))?;
        let trace = parse_rat_list(inner)?;
        if trace.len() != l {
            return Err(err(format!(
                "`{s}`: trace length {} != l = {l}",
                trace.len()
            )));
        }
        return FrobeniusAlgebra::zl(l, trace, "custom").map_err(|e| err(format!("`{s}`: {e}")));
    }
    Err(err(format!("unrecognized algebra spec `{s}`")))
}

/// Algebra definition file: keys `dim`, `structure_constants` (row-major
/// rationals, dim^3 entries), `unit`, `trace`, optional `name`.
pub fn load_algebra_file(path: &Path) -> Result<FrobeniusAlgebra<Rat>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err(format!("cannot read algebra file {}: {e}", path.display())))?;
    let mut kv: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            err(format!(
                "{}:{}: expected `key = value`",
                path.display(),
                lineno + 1
            ))
        })?;
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    let dim = parse_usize(
        kv.get("dim")
            .ok_or_else(|| err("algebra file: missing `dim`"))?,
    )?;
    let structure = parse_rat_list(
        kv.get("structure_constants")
            .ok_or_else(|| err("algebra file: missing `structure_constants`"))?,
    )?;
    if structure.len() != dim * dim * dim {
        return Err(err(format!(
            "algebra file: structure_constants needs {} entries, got {}",
            dim * dim * dim,
            structure.len()
        )));
    }
    let unit = parse_rat_list(
        kv.get("unit")
            .ok_or_else(|| err("algebra file: missing `unit`"))?,
    )?;
    let trace = parse_rat_list(
        kv.get("trace")
            .ok_or_else(|| err("algebra file: missing `trace`"))?,
    )?;
    let name = kv.get("name").cloned().unwrap_or_else(|| "tr".to_string());
    FrobeniusAlgebra::new(dim, structure, unit, trace, &name)
        .map_err(|e| err(format!("algebra file {}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialField {
    U,
    M,
}

#[derive(Debug, Clone)]
pub struct SineTerm {
    pub k: usize,
    pub amp: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum Profile {
    Zero,
    Sine(Vec<SineTerm>),
    Sech2 { c: f64, x0: f64, component: usize },
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub struct InitialCfg {
    pub field: InitialField,
    pub profile: Profile,
}

#[derive(Debug, Clone)]
pub struct TimeCfg {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: SchemeChoice,
}

#[derive(Debug, Clone)]
pub struct OutputCfg {
    pub path: Option<PathBuf>,
    pub every: usize,
    pub fields: bool,
}

/// A fully parsed run configuration. Sections beyond [algebra], [inertia] and
/// [zeta] are optional for the symbolic subcommands.
#[derive(Debug)]
pub struct RunConfig {
    pub algebras: Vec<FrobeniusAlgebra<Rat>>,
    pub inertia: Vec<Vec<Rat>>,
    pub zeta: Vec<Rat>,
    pub domain: Option<(f64, usize)>,
    pub time: Option<TimeCfg>,
    pub initial: Option<InitialCfg>,
    pub output: OutputCfg,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Self::from_str_with_base(&text, &base)
    }

    pub fn from_str_with_base(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut sections = Sections::parse(text)?;

        let spec = sections.take_required("algebra", "spec")?;
        let algebras: Result<Vec<_>, _> = split_top_level(&spec)
            .into_iter()
            .map(|s| parse_algebra_spec(&s, base))
            .collect();
        let algebras = algebras?;
        if algebras.is_empty() {
            return Err(err("at least one algebra spec is required"));
        }
        let dim = algebras[0].dim();
        for a in &algebras[1..] {
            if !a.same_table(&algebras[0]) {
                return Err(err(
                    "all algebra specs must share one multiplication table (traces may differ)",
                ));
            }
        }

        let mut inertia = Vec::new();
        loop {
            let key = format!("alpha{}", inertia.len());
            match sections.take("inertia", &key) {
                Some(v) => {
                    let coeffs = parse_rat_list(&v)?;
                    if coeffs.len() != dim {
                        return Err(err(format!(
                            "[inertia] {key}: expected {dim} components, got {}",
                            coeffs.len()
                        )));
                    }
                    inertia.push(coeffs);
                }
                None => break,
            }
        }
        if inertia.is_empty() {
            return Err(err(
                "[inertia] must define alpha0 (and optionally alpha1, ...)",
            ));
        }
        let zeta = parse_rat_list(&sections.take_required("zeta", "zeta")?)?;
        if zeta.len() != dim {
            return Err(err(format!(
                "[zeta] expected {dim} components, got {}",
                zeta.len()
            )));
        }

        let domain = match (
            sections.take("domain", "length"),
            sections.take("domain", "n"),
        ) {
            (None, None) => None,
            (Some(l), Some(n)) => {
                let length = parse_f64(&l)?;
                let n = parse_usize(&n)?;
                if !(length > 0.0) {
                    return Err(err("[domain] length must be positive"));
                }
                Some((length, n))
            }
            _ => return Err(err("[domain] needs both `length` and `n`")),
        };

        let time = match sections.take("time", "dt") {
            None => None,
            Some(dt) => {
                let dt = parse_f64(&dt)?;
                let t_end = parse_f64(&sections.take_required("time", "t_end")?)?;
                if !(dt > 0.0) {
                    return Err(err("[time] dt must be positive"));
                }
                if !(t_end > 0.0) {
                    return Err(err("[time] t_end must be positive"));
                }
                let scheme = match sections
                    .take("time", "scheme")
                    .unwrap_or_else(|| "auto".to_string())
                    .as_str()
                {
                    "auto" => SchemeChoice::Auto,
                    "rk4" => SchemeChoice::Rk4,
                    "if_rk4" => SchemeChoice::IfRk4,
                    other => return Err(err(format!("[time] unknown scheme `{other}`"))),
                };
                Some(TimeCfg { dt, t_end, scheme })
            }
        };

        let initial = match sections.take("initial", "profile") {
            None => None,
            Some(profile) => {
                let field = match sections
                    .take("initial", "field")
                    .unwrap_or_else(|| "u".to_string())
                    .as_str()
                {
                    "u" => InitialField::U,
                    "m" => InitialField::M,
                    other => return Err(err(format!("[initial] unknown field `{other}`"))),
                };
                let profile = match profile.as_str() {
                    "zero" => Profile::Zero,
                    "sine" => {
                        let mut terms = Vec::new();
                        let keys = sections.section_keys("initial");
                        let mut indices: Vec<usize> = keys
                            .iter()
                            .filter_map(|k| {
                                k.strip_prefix("sine.")
                                    .and_then(|r| r.strip_suffix(".k"))
                                    .and_then(|i| i.parse().ok())
                            })
                            .collect();
                        indices.sort_unstable();
                        if indices.is_empty() {
                            return Err(err("[initial] sine profile needs sine.<i>.k entries"));
                        }
                        for i in indices {
                            let k = parse_usize(
                                &sections.take_required("initial", &format!("sine.{i}.k"))?,
                            )?;
                            let amp = parse_f64_list(
                                &sections.take_required("initial", &format!("sine.{i}.amp"))?,
                            )?;
                            if amp.len() != dim {
                                return Err(err(format!(
                                    "[initial] sine.{i}.amp: expected {dim} components"
                                )));
                            }
                            terms.push(SineTerm { k, amp });
                        }
                        Profile::Sine(terms)
                    }
                    "sech2" => {
                        let c = parse_f64(&sections.take_required("initial", "sech2.c")?)?;
                        let x0 = parse_f64(&sections.take_required("initial", "sech2.x0")?)?;
                        let component = sections
                            .take("initial", "sech2.component")
                            .map(|s| parse_usize(&s))
                            .transpose()?
                            .unwrap_or(1);
                        if component == 0 || component > dim {
                            return Err(err("[initial] sech2.component out of range (1-based)"));
                        }
                        if !(c > 0.0) {
                            return Err(err("[initial] sech2.c must be positive"));
                        }
                        Profile::Sech2 {
                            c,
                            x0,
                            component: component - 1,
                        }
                    }
                    "file" => {
                        let p = sections.take_required("initial", "file.path")?;
                        Profile::File(base.join(p))
                    }
                    other => return Err(err(format!("[initial] unknown profile `{other}`"))),
                };
                Some(InitialCfg { field, profile })
            }
        };

        let output = OutputCfg {
            path: sections.take("output", "path").map(|p| base.join(p)),
            every: sections
                .take("output", "every")
                .map(|s| parse_usize(&s))
                .transpose()?
                .unwrap_or(1)
                .max(1),
            fields: match sections.take("output", "fields").as_deref() {
                None | Some("false") => false,
                Some("true") => true,
                Some(other) => {
                    return Err(err(format!(
                        "[output] fields must be true/false, got `{other}`"
                    )))
                }
            },
        };

        sections.finish()?;
        Ok(Self {
            algebras,
            inertia,
            zeta,
            domain,
            time,
            initial,
            output,
        })
    }

    pub fn primary_algebra(&self) -> &FrobeniusAlgebra<Rat> {
        &self.algebras[0]
    }

    pub fn build_equation(&self) -> Result<EulerEquation, ConfigError> {
        let alg = self.primary_algebra();
        let coeffs: Vec<AlgebraElement<Rat>> = self
            .inertia
            .iter()
            .map(|v| AlgebraElement::new(v.clone()))
            .collect();
        let inertia = InertiaSpec::new(coeffs).map_err(|e| err(format!("{e}")))?;
        let zeta = AlgebraElement::new(self.zeta.clone());
        build_euler_equation(alg, inertia, zeta).map_err(|e| err(format!("{e}")))
    }

    /// Construct the initial field samples on the configured grid.
    pub fn build_initial_field(&self) -> Result<GridField, SolverError> {
        let (length, n) = self
            .domain
            .ok_or_else(|| SolverError::Unsupported("[domain] section required".into()))?;
        let dim = self.primary_algebra().dim();
        let initial = self
            .initial
            .as_ref()
            .ok_or_else(|| SolverError::Unsupported("[initial] section required".into()))?;
        match &initial.profile {
            Profile::Zero => GridField::zeros(n, dim, length),
            Profile::Sine(terms) => GridField::from_fn(n, dim, length, |x, c| {
                terms
                    .iter()
                    .map(|t| {
                        t.amp[c] * (2.0 * std::f64::consts::PI * t.k as f64 * x / length).sin()
                    })
                    .sum()
            }),
            Profile::Sech2 { c, x0, component } => {
                let (c, x0, comp) = (*c, *x0, *component);
                GridField::from_fn(n, dim, length, move |x, cc| {
                    if cc == comp {
                        let s = 1.0 / ((c.sqrt() * (x - x0) / 2.0).cosh());
                        c * s * s
                    } else {
                        0.0
                    }
                })
            }
            Profile::File(path) => load_field_csv(path, n, dim, length),
        }
    }
}

/// Field samples from CSV rows `x, c1, ..., cl` (a non-numeric header line is
/// skipped). Row count must match the grid.
pub fn load_field_csv(
    path: &Path,
    n: usize,
    dim: usize,
    length: f64,
) -> Result<GridField, SolverError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SolverError::Unsupported(format!("cannot read {}: {e}", path.display())))?;
    let mut g = GridField::zeros(n, dim, length)?;
    let mut row = 0usize;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells[0].parse::<f64>().is_err() {
            continue; // header
        }
        if cells.len() != dim + 1 {
            return Err(SolverError::Unsupported(format!(
                "{}: expected {} columns, got {}",
                path.display(),
                dim + 1,
                cells.len()
            )));
        }
        if row >= n {
            return Err(SolverError::Unsupported(format!(
                "{}: more than {n} data rows",
                path.display()
            )));
        }
        for c in 0..dim {
            let v = cells[c + 1].parse::<f64>().map_err(|_| {
                SolverError::Unsupported(format!(
                    "{}: bad number `{}`",
                    path.display(),
                    cells[c + 1]
                ))
            })?;
            g.set(row, c, v);
        }
        row += 1;
    }
    if row != n {
        return Err(SolverError::Unsupported(format!(
            "{}: expected {n} data rows, got {row}",
            path.display()
        )));
    }
    Ok(g)
}
