//! Session configs: TOML files with `[group]`, `[ring]`, `[window]`,
//! `[[module]]`, `[ext]`, `[torsion]`, `[resolve]` and `[dga]` sections.
//!
//! Every block is validated by the engine before any command runs; the
//! first failure aborts with the block it came from.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use tormod::examples;
use tormod::formality::{free_cdga, FreeCdgaSpec};
use tormod::parse::{parse_expr, ExprContext};
use tormod::rational::{self, Rational};
use tormod::{
    Convention, DegreeWindow, EquivariantDGA, FiniteGroup, GeneratorSpace, GradedModulePresentation,
    IndecomposableData, RationalMatrix, Representation, TwistedGroupRing,
};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    group: RawGroup,
    ring: RawRing,
    window: Option<RawWindow>,
    #[serde(default)]
    module: Vec<RawModule>,
    ext: Option<RawExt>,
    torsion: Option<RawTarget>,
    resolve: Option<RawTarget>,
    dga: Option<RawDga>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    builtin: Option<String>,
    elements: Option<Vec<String>>,
    table: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    generators: Vec<String>,
    degrees: Vec<i64>,
    #[serde(default)]
    action: BTreeMap<String, Vec<Vec<toml::Value>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWindow {
    t_min: i64,
    t_max: i64,
    margin: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: String,
    degree: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    name: String,
    builtin: Option<String>,
    degree: Option<i64>,
    generators: Option<Vec<RawGenerator>>,
    #[serde(default)]
    relations: Vec<String>,
    #[serde(default)]
    suspension: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExt {
    source: String,
    target: String,
    convention: Option<RawConvention>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConvention {
    a: i64,
    b: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    module: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDgaGenerator {
    name: String,
    degree: i64,
    #[serde(default)]
    d: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBasisChange {
    degree: i64,
    names: Vec<String>,
    matrix: Vec<Vec<toml::Value>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIndecomposables {
    generators: Vec<RawGenerator>,
    #[serde(default)]
    action: BTreeMap<String, Vec<Vec<toml::Value>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDga {
    builtin: Option<String>,
    cutoff: usize,
    generators: Option<Vec<RawDgaGenerator>>,
    #[serde(default)]
    action: BTreeMap<String, Vec<Vec<toml::Value>>>,
    #[serde(default)]
    basis_change: Vec<RawBasisChange>,
    basis: Option<Vec<Vec<String>>>,
    #[serde(default)]
    differential: Vec<String>,
    #[serde(default)]
    products: Vec<String>,
    #[serde(default)]
    basis_action: BTreeMap<String, Vec<String>>,
    indecomposables: Option<RawIndecomposables>,
}

pub struct DgaSession {
    pub algebra: EquivariantDGA,
    pub indecomposables: IndecomposableData,
    pub cutoff: usize,
}

pub struct Session {
    pub ring: Arc<TwistedGroupRing>,
    pub window: DegreeWindow,
    pub window_given: bool,
    pub modules: Vec<(String, GradedModulePresentation)>,
    pub ext: Option<(String, String)>,
    pub convention: Convention,
    pub torsion: Option<String>,
    pub resolve: Option<String>,
    pub dga: Option<DgaSession>,
}

impl Session {
    pub fn module(&self, name: &str) -> Result<&GradedModulePresentation, CliError> {
        self.modules
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| CliError::Config(format!("no module named {name:?} in the config")))
    }
}

fn block<T>(what: &str, r: tormod::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Config(format!("{what}: {e}")))
}

fn rational_of(value: &toml::Value, what: &str) -> Result<Rational, CliError> {
    match value {
        toml::Value::String(s) => block(what, rational::parse(s)),
        toml::Value::Integer(n) => Ok(Rational::from_integer((*n).into())),
        toml::Value::Float(x) => Err(CliError::Config(format!(
            "{what}: decimal {x} is not exact; write rationals as strings like \"-1/2\""
        ))),
        other => Err(CliError::Config(format!("{what}: expected a rational, found {other}"))),
    }
}

fn matrix_of(rows: &[Vec<toml::Value>], what: &str) -> Result<RationalMatrix, CliError> {
    let cols = rows.first().map_or(0, Vec::len);
    let parsed = rows
        .iter()
        .map(|row| row.iter().map(|v| rational_of(v, what)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    block(what, RationalMatrix::from_rows(parsed, cols))
}

fn parse_group(raw: &RawGroup) -> Result<Arc<FiniteGroup>, CliError> {
    let group = match (&raw.builtin, &raw.elements, &raw.table) {
        (Some(name), None, None) => match name.as_str() {
            "trivial" | "Z1" => FiniteGroup::trivial(),
            "Klein" | "Z2xZ2" => FiniteGroup::klein_four(),
            "S3" => FiniteGroup::symmetric3(),
            other => {
                let n = other
                    .strip_prefix('Z')
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| CliError::Config(format!("[group]: unknown builtin group {other:?}")))?;
                FiniteGroup::cyclic(n)
            }
        },
        (None, Some(elements), Some(table)) => {
            let index = |name: &str| {
                elements
                    .iter()
                    .position(|e| e == name)
                    .ok_or_else(|| CliError::Config(format!("[group]: table entry {name:?} is not an element")))
            };
            let rows = table
                .iter()
                .map(|row| row.iter().map(|x| index(x)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            block("[group]", FiniteGroup::from_table(elements.clone(), rows))?
        }
        _ => {
            return Err(CliError::Config(
                "[group]: give either `builtin` or both `elements` and `table`".into(),
            ))
        }
    };
    Ok(Arc::new(group))
}

fn parse_action(
    group: &Arc<FiniteGroup>,
    dim: usize,
    action: &BTreeMap<String, Vec<Vec<toml::Value>>>,
    what: &str,
) -> Result<Representation, CliError> {
    for name in action.keys() {
        if group.element(name).is_none() {
            return Err(CliError::Config(format!("{what}: {name:?} is not a group element")));
        }
    }
    let matrices = group
        .elements()
        .map(|w| match action.get(group.name(w)) {
            Some(rows) => matrix_of(rows, what),
            None if w == group.identity() => Ok(RationalMatrix::identity(dim)),
            None => Err(CliError::Config(format!(
                "{what}: missing action matrix for {}",
                group.name(w)
            ))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if action.is_empty() {
        return Ok(Representation::trivial(group.clone(), dim));
    }
    block(what, Representation::new(group.clone(), dim, matrices))
}

fn parse_ring(group: &Arc<FiniteGroup>, raw: &RawRing) -> Result<Arc<TwistedGroupRing>, CliError> {
    let action = parse_action(group, raw.generators.len(), &raw.action, "[ring] action")?;
    let gens = block(
        "[ring]",
        GeneratorSpace::new(raw.generators.clone(), raw.degrees.clone(), action),
    )?;
    block("[ring]", TwistedGroupRing::new(gens))
}

fn parse_module(ring: &Arc<TwistedGroupRing>, raw: &RawModule) -> Result<GradedModulePresentation, CliError> {
    let what = format!("module {:?}", raw.name);
    let m = match (&raw.builtin, &raw.generators) {
        (Some(b), None) => {
            if !raw.relations.is_empty() {
                return Err(CliError::Config(format!("{what}: builtin modules take no relations")));
            }
            match b.as_str() {
                "free" => GradedModulePresentation::free(ring.clone(), raw.degree.unwrap_or(0)),
                "residue_regular" => GradedModulePresentation::residue_regular(ring.clone()),
                "residue_trivial" => GradedModulePresentation::residue_trivial(ring.clone()),
                "zero" => GradedModulePresentation::zero(ring.clone()),
                other => return Err(CliError::Config(format!("{what}: unknown builtin {other:?}"))),
            }
        }
        (None, Some(gens)) => {
            let gens = gens.iter().map(|g| (g.name.clone(), g.degree)).collect();
            block(
                &what,
                GradedModulePresentation::parse(ring.clone(), gens, &raw.relations),
            )?
        }
        _ => {
            return Err(CliError::Config(format!(
                "{what}: give either `builtin` or `generators`"
            )))
        }
    };
    if raw.degree.is_some() && raw.builtin.as_deref() != Some("free") {
        return Err(CliError::Config(format!(
            "{what}: `degree` only applies to the free builtin"
        )));
    }
    Ok(m.suspend(raw.suspension))
}

/// Linear combinations of named basis vectors, for explicit DGA entries.
struct Linear<'a> {
    names: &'a [String],
}

impl ExprContext for Linear<'_> {
    type Value = Option<Vec<Rational>>;

    fn scalar(&self, q: Rational) -> Self::Value {
        if q == Rational::from_integer(0.into()) {
            Some(vec![Rational::from_integer(0.into()); self.names.len()])
        } else {
            None
        }
    }

    fn atom(&self, name: &str) -> tormod::Result<Self::Value> {
        let i = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| tormod::Error::Parse(format!("{name:?} is not a basis element of this degree")))?;
        let mut v = vec![Rational::from_integer(0.into()); self.names.len()];
        v[i] = Rational::from_integer(1.into());
        Ok(Some(v))
    }

    fn add(&self, a: Self::Value, b: Self::Value) -> tormod::Result<Self::Value> {
        match (a, b) {
            (Some(a), Some(b)) => Ok(Some(a.iter().zip(&b).map(|(x, y)| x + y).collect())),
            _ => Err(tormod::Error::Parse("constants are not allowed here".into())),
        }
    }

    fn mul(&self, _: Self::Value, _: Self::Value) -> tormod::Result<Self::Value> {
        Err(tormod::Error::Parse(
            "write products of basis elements as single names".into(),
        ))
    }

    fn mul_scalar(&self, a: Self::Value, q: Rational) -> Self::Value {
        a.map(|v| v.iter().map(|x| x * &q).collect())
    }
}

fn linear(names: &[String], text: &str, what: &str) -> Result<Vec<Rational>, CliError> {
    let value = block(what, parse_expr(&Linear { names }, text))?;
    value.ok_or_else(|| CliError::Config(format!("{what}: constants are not allowed in {text:?}")))
}

/// Splits `lhs -> rhs`.
fn arrow<'a>(entry: &'a str, what: &str) -> Result<(&'a str, &'a str), CliError> {
    entry
        .split_once("->")
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| CliError::Config(format!("{what}: expected `x -> expression`, got {entry:?}")))
}

fn explicit_dga(group: &Arc<FiniteGroup>, raw: &RawDga, basis: &[Vec<String>]) -> Result<EquivariantDGA, CliError> {
    let what = "[dga]";
    let depth = raw.cutoff + 1;
    if basis.len() != depth + 1 {
        return Err(CliError::Config(format!(
            "{what}: cutoff {} needs bases for degrees 0 to -{depth} ({} lists), got {}",
            raw.cutoff,
            depth + 1,
            basis.len()
        )));
    }
    if basis[0] != ["1"] {
        return Err(CliError::Config(format!(
            "{what}: degree 0 must have the single basis element \"1\""
        )));
    }
    let locate = |name: &str| -> Result<(usize, usize), CliError> {
        basis
            .iter()
            .enumerate()
            .find_map(|(k, b)| b.iter().position(|n| n == name).map(|i| (k, i)))
            .ok_or_else(|| CliError::Config(format!("{what}: unknown basis element {name:?}")))
    };
    let zero = |n: usize| vec![Rational::from_integer(0.into()); n];
    let mut differentials: Vec<RationalMatrix> = (0..depth)
        .map(|k| RationalMatrix::zeros(basis[k + 1].len(), basis[k].len()))
        .collect();
    for entry in &raw.differential {
        let (lhs, rhs) = arrow(entry, "[dga] differential")?;
        let (k, i) = locate(lhs)?;
        if k == depth {
            return Err(CliError::Config(format!(
                "{what}: d({lhs}) lies below the stored degrees"
            )));
        }
        let v = linear(&basis[k + 1], rhs, "[dga] differential")?;
        for (j, q) in v.into_iter().enumerate() {
            differentials[k].set(j, i, q);
        }
    }
    let mut table: BTreeMap<(usize, usize, usize, usize), Vec<Rational>> = BTreeMap::new();
    for entry in &raw.products {
        let (lhs, rhs) = arrow(entry, "[dga] products")?;
        let (x, y) = lhs
            .split_once('*')
            .map(|(a, b)| (a.trim(), b.trim()))
            .ok_or_else(|| CliError::Config(format!("[dga] products: expected `x*y -> expression`, got {entry:?}")))?;
        let (k1, i) = locate(x)?;
        let (k2, j) = locate(y)?;
        if k1 + k2 > depth {
            return Err(CliError::Config(format!(
                "[dga] products: {x}*{y} lies below the stored degrees"
            )));
        }
        let v = linear(&basis[k1 + k2], rhs, "[dga] products")?;
        let sign = if (k1 * k2) % 2 == 1 {
            -Rational::from_integer(1.into())
        } else {
            Rational::from_integer(1.into())
        };
        table.insert((k2, j, k1, i), v.iter().map(|q| q * &sign).collect());
        table.insert((k1, i, k2, j), v);
    }
    let mut products = BTreeMap::new();
    for k1 in 0..=depth {
        for k2 in 0..=depth - k1 {
            let rows = basis[k1 + k2].len();
            let mut cols = Vec::new();
            for i in 0..basis[k1].len() {
                for j in 0..basis[k2].len() {
                    let v = if k1 == 0 {
                        let mut v = zero(rows);
                        v[j] = Rational::from_integer(1.into());
                        v
                    } else if k2 == 0 {
                        let mut v = zero(rows);
                        v[i] = Rational::from_integer(1.into());
                        v
                    } else {
                        table.get(&(k1, i, k2, j)).cloned().unwrap_or_else(|| zero(rows))
                    };
                    cols.push(v);
                }
            }
            products.insert((k1, k2), RationalMatrix::from_columns(&cols, rows));
        }
    }
    for name in raw.basis_action.keys() {
        if group.element(name).is_none() {
            return Err(CliError::Config(format!(
                "[dga] basis_action: {name:?} is not a group element"
            )));
        }
    }
    let mut action = Vec::with_capacity(depth + 1);
    for (k, names) in basis.iter().enumerate() {
        let mut matrices = Vec::with_capacity(group.order());
        for w in group.elements() {
            let mut m = RationalMatrix::identity(names.len());
            for entry in raw.basis_action.get(group.name(w)).into_iter().flatten() {
                let (lhs, rhs) = arrow(entry, "[dga] basis_action")?;
                let (kk, i) = locate(lhs)?;
                if kk != k {
                    continue;
                }
                let v = linear(names, rhs, "[dga] basis_action")?;
                for (j, q) in v.into_iter().enumerate() {
                    m.set(j, i, q);
                }
            }
            matrices.push(m);
        }
        action.push(block(
            "[dga] basis_action",
            Representation::new(group.clone(), names.len(), matrices),
        )?);
    }
    let mut unit = zero(1);
    unit[0] = Rational::from_integer(1.into());
    let names = basis.to_vec();
    block(
        what,
        EquivariantDGA::new(group.clone(), names, differentials, products, action, unit),
    )
}

fn parse_dga(group: &Arc<FiniteGroup>, raw: &RawDga) -> Result<DgaSession, CliError> {
    let what = "[dga]";
    let algebra = match (&raw.builtin, &raw.generators, &raw.basis) {
        (Some(b), None, None) => match b.as_str() {
            "c1" => block(what, examples::c1_dga(raw.cutoff))?,
            "formal" => block(what, examples::formal_dga(raw.cutoff))?,
            other => return Err(CliError::Config(format!("{what}: unknown builtin {other:?}"))),
        },
        (None, Some(gens), None) => {
            let action = parse_action(group, gens.len(), &raw.action, "[dga] action")?;
            let spec = FreeCdgaSpec {
                names: gens.iter().map(|g| g.name.clone()).collect(),
                degrees: gens.iter().map(|g| g.degree).collect(),
                differentials: gens.iter().map(|g| g.d.clone()).collect(),
                action,
            };
            block(what, free_cdga(&spec, raw.cutoff))?
        }
        (None, None, Some(basis)) => explicit_dga(group, raw, basis)?,
        _ => {
            return Err(CliError::Config(format!(
                "{what}: give exactly one of `builtin`, `generators` or `basis`"
            )))
        }
    };
    if raw.builtin.is_none() && raw.generators.is_none() && !raw.action.is_empty() {
        return Err(CliError::Config(format!(
            "{what}: explicit bases take `basis_action`, not `action`"
        )));
    }
    let mut algebra = algebra;
    for change in &raw.basis_change {
        let p = matrix_of(&change.matrix, "[dga] basis_change")?;
        algebra = block(
            "[dga] basis_change",
            algebra.with_basis_change(change.degree, change.names.clone(), &p),
        )?;
    }
    let indecomposables = match &raw.indecomposables {
        Some(v) => {
            let action = parse_action(group, v.generators.len(), &v.action, "[dga.indecomposables] action")?;
            block(
                "[dga.indecomposables]",
                IndecomposableData::new(
                    v.generators.iter().map(|g| g.name.clone()).collect(),
                    v.generators.iter().map(|g| g.degree).collect(),
                    action,
                ),
            )?
        }
        None if raw.builtin.is_some() => block(what, examples::c1_indecomposables())?,
        None => return Err(CliError::Config(format!("{what}: missing [dga.indecomposables]"))),
    };
    Ok(DgaSession {
        algebra,
        indecomposables,
        cutoff: raw.cutoff,
    })
}

pub fn parse_config_str(text: &str) -> Result<Session, CliError> {
    if text.trim().is_empty() {
        return Err(CliError::Config("syntax error: empty config".into()));
    }
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(format!("syntax error: {e}")))?;
    let group = parse_group(&raw.group)?;
    let ring = parse_ring(&group, &raw.ring)?;
    let mut modules = Vec::with_capacity(raw.module.len());
    for m in &raw.module {
        if modules.iter().any(|(n, _): &(String, _)| *n == m.name) {
            return Err(CliError::Config(format!("duplicate module name {:?}", m.name)));
        }
        modules.push((m.name.clone(), parse_module(&ring, m)?));
    }
    let default_margin = modules
        .iter()
        .map(|(_, m)| m.default_margin())
        .max()
        .unwrap_or(2 * ring.max_step());
    let (window, window_given) = match &raw.window {
        Some(w) => (
            block(
                "[window]",
                DegreeWindow::new(w.t_min, w.t_max, w.margin.unwrap_or(default_margin)),
            )?,
            true,
        ),
        None => (block("[window]", DegreeWindow::new(-10, 10, default_margin))?, false),
    };
    let convention = raw
        .ext
        .as_ref()
        .and_then(|e| e.convention.as_ref())
        .map_or_else(Convention::default, |c| Convention { a: c.a, b: c.b });
    let session = Session {
        ring,
        window,
        window_given,
        ext: raw.ext.as_ref().map(|e| (e.source.clone(), e.target.clone())),
        convention,
        torsion: raw.torsion.as_ref().map(|t| t.module.clone()),
        resolve: raw.resolve.as_ref().map(|t| t.module.clone()),
        dga: raw.dga.as_ref().map(|d| parse_dga(&group, d)).transpose()?,
        modules,
    };
    for name in [
        session.ext.as_ref().map(|e| &e.0),
        session.ext.as_ref().map(|e| &e.1),
        session.torsion.as_ref(),
        session.resolve.as_ref(),
    ]
    .into_iter()
    .flatten()
    {
        session.module(name)?;
    }
    Ok(session)
}

pub fn parse_config(path: &Path) -> Result<Session, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}
