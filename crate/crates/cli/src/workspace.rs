//! Input documents: named groups, actions and morphisms in TOML.
//!
//! ```toml
//! bound = 512
//!
//! [group.ZN]
//! kind = "builtin"
//! set = "Z"
//! cone = "natural"
//!
//! [group.E]
//! kind = "semidirect"
//! kernel = "ZN"
//! quotient = "ZN"
//! action = "flip"
//! cone = "lex"
//!
//! [action.flip]
//! actor = "ZN"
//! acted = "ZN"
//! matrices = [[[-1]]]
//!
//! [morphism.f]
//! source = "ZN"
//! target = "ZN"
//! matrix = [[2]]
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use rpgroup::abelian::{FgAbelianGroup, IntMatrix};
use rpgroup::cone::Cone;
use rpgroup::finite::FiniteGroupTable;
use rpgroup::morphism::HomMap;
use rpgroup::splitext::{ConePolicy, SemidirectGroup};
use rpgroup::{Automorphism, Carrier, Element, GroupAction, Morphism, RPGroup};

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    bound: Option<u64>,
    #[serde(default)]
    group: BTreeMap<String, RawGroup>,
    #[serde(default)]
    action: BTreeMap<String, RawAction>,
    #[serde(default)]
    morphism: BTreeMap<String, RawMorphism>,
}

/// An integer or a decimal string (for values beyond 64 bits).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Text(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ConeSpec {
    Name(String),
    Indices(Vec<usize>),
    Labels(Vec<String>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    kind: String,
    set: Option<String>,
    rank: Option<usize>,
    torsion: Option<Vec<Num>>,
    table: Option<Vec<Vec<usize>>>,
    labels: Option<Vec<String>>,
    cone: Option<ConeSpec>,
    generators: Option<Vec<GenSpec>>,
    kernel: Option<String>,
    quotient: Option<String>,
    action: Option<String>,
    alpha: Option<Num>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum GenSpec {
    Scalar(Num),
    Vector(Vec<Num>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAction {
    actor: String,
    acted: String,
    generators: Option<Vec<usize>>,
    matrices: Option<Vec<Vec<Vec<Num>>>>,
    scalars: Option<Vec<Num>>,
    permutations: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    source: String,
    target: String,
    map: Option<String>,
    table: Option<Vec<usize>>,
    matrix: Option<Vec<Vec<Num>>>,
    scalar: Option<Num>,
    images: Option<Vec<String>>,
}

/// A validated input document.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub bound: u64,
    pub groups: BTreeMap<String, RPGroup>,
    pub semidirect: BTreeMap<String, SemidirectGroup>,
    pub actions: BTreeMap<String, GroupAction>,
    pub morphisms: BTreeMap<String, Morphism>,
}

pub const DEFAULT_BOUND: u64 = 512;

/// The named examples available without an input file.
pub const BUILTIN: &str = include_str!("builtin.toml");

struct Locator<'a> {
    lines: Vec<&'a str>,
}

impl<'a> Locator<'a> {
    fn new(src: &'a str) -> Self {
        Locator { lines: src.lines().collect() }
    }

    /// Line (1-based) of `field` inside `[section.name]`, falling back to the header.
    fn line(&self, section: &str, name: &str, field: &str) -> usize {
        let header = format!("[{section}.{name}]");
        let Some(start) = self.lines.iter().position(|l| l.trim().replace(' ', "") == header) else {
            return 1;
        };
        for (i, l) in self.lines.iter().enumerate().skip(start + 1) {
            let t = l.trim_start();
            if t.starts_with('[') && !t.starts_with("[[") {
                break;
            }
            if t.split('=').next().is_some_and(|k| k.trim() == field) {
                return i + 1;
            }
        }
        start + 1
    }

    fn err(&self, section: &str, name: &str, field: &str, message: impl Into<String>) -> CliError {
        CliError::Input {
            line: self.line(section, name, field),
            field: format!("{section}.{name}.{field}"),
            message: message.into(),
        }
    }
}

fn big(n: &Num) -> Result<BigInt, String> {
    match n {
        Num::Int(i) => Ok(BigInt::from(*i)),
        Num::Text(s) => s.trim().parse().map_err(|_| format!("'{s}' is not an integer")),
    }
}

fn rational(n: &Num) -> Result<BigRational, String> {
    match n {
        Num::Int(i) => Ok(BigRational::from_integer((*i).into())),
        Num::Text(s) => parse_rational(s),
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let bad = || format!("'{s}' is not a rational number");
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b == BigInt::from(0) {
                return Err(format!("'{s}' has a zero denominator"));
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn matrix(rows: &[Vec<Num>], cols: usize) -> Result<IntMatrix, String> {
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(big).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    if let Some(r) = rows.iter().find(|r| r.len() != cols) {
        return Err(format!("row has {} entries, expected {cols}", r.len()));
    }
    Ok(IntMatrix::from_rows(rows, cols))
}

fn gen_element(carrier: &Carrier, g: &GenSpec) -> Result<Element, String> {
    let e = match (carrier, g) {
        (Carrier::Abelian(_), GenSpec::Scalar(n)) => Element::Vector(vec![big(n)?]),
        (Carrier::Abelian(_), GenSpec::Vector(v)) => Element::Vector(v.iter().map(big).collect::<Result<_, _>>()?),
        (Carrier::Rational, GenSpec::Scalar(n)) => Element::Rational(rational(n)?),
        _ => return Err("generator does not fit the group".into()),
    };
    carrier.check(&e).map_err(|e| e.to_string())?;
    Ok(carrier.normalize(&e))
}

impl Workspace {
    pub fn builtin(bound: Option<u64>) -> CliResult<Self> {
        Self::parse(BUILTIN, bound)
    }

    /// Parses and validates a document; `bound` overrides the document's bound.
    pub fn parse(src: &str, bound: Option<u64>) -> CliResult<Self> {
        let raw: RawDocument = toml::from_str(src).map_err(|e| {
            let line = e
                .span()
                .map(|s| src[..s.start.min(src.len())].matches('\n').count() + 1)
                .unwrap_or(1);
            CliError::Input {
                line,
                field: "document".into(),
                message: e.message().to_string(),
            }
        })?;
        let loc = Locator::new(src);
        let bound = bound.or(raw.bound).unwrap_or(DEFAULT_BOUND);
        let mut ws = Workspace {
            bound,
            groups: BTreeMap::new(),
            semidirect: BTreeMap::new(),
            actions: BTreeMap::new(),
            morphisms: BTreeMap::new(),
        };
        for name in raw.action.keys().chain(raw.morphism.keys()) {
            if raw.group.contains_key(name) {
                return Err(loc.err("group", name, "kind", format!("name '{name}' is declared twice")));
            }
        }
        if let Some(name) = raw.action.keys().find(|n| raw.morphism.contains_key(*n)) {
            return Err(loc.err("action", name, "actor", format!("name '{name}' is declared twice")));
        }

        for (name, g) in raw.group.iter().filter(|(_, g)| g.kind != "semidirect") {
            let group = build_group(name, g, bound, &loc)?;
            ws.groups.insert(name.clone(), group);
        }
        for (name, a) in &raw.action {
            let action = ws.build_action(name, a, &loc)?;
            ws.actions.insert(name.clone(), action);
        }
        for (name, g) in raw.group.iter().filter(|(_, g)| g.kind == "semidirect") {
            let s = ws.build_semidirect(name, g, &loc)?;
            ws.groups.insert(name.clone(), s.object());
            ws.semidirect.insert(name.clone(), s);
        }
        for (name, m) in &raw.morphism {
            let f = ws.build_morphism(name, m, &loc)?;
            ws.morphisms.insert(name.clone(), f);
        }
        Ok(ws)
    }

    pub fn group(&self, name: &str) -> CliResult<&RPGroup> {
        self.groups
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("no group named '{name}'")))
    }

    pub fn morphism(&self, name: &str) -> CliResult<&Morphism> {
        self.morphisms
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("no morphism named '{name}'")))
    }

    pub fn split(&self, name: &str) -> CliResult<&SemidirectGroup> {
        self.semidirect
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("no semidirect group named '{name}'")))
    }

    fn lookup(&self, loc: &Locator, section: &str, name: &str, field: &str, target: &str) -> CliResult<&RPGroup> {
        self.groups
            .get(target)
            .ok_or_else(|| loc.err(section, name, field, format!("unknown group '{target}'")))
    }

    fn build_action(&self, name: &str, a: &RawAction, loc: &Locator) -> CliResult<GroupAction> {
        let actor = self.lookup(loc, "action", name, "actor", &a.actor)?.carrier().clone();
        let acted = self.lookup(loc, "action", name, "acted", &a.acted)?.carrier().clone();
        let e = |field: &str, m: String| loc.err("action", name, field, m);
        let mut images = Vec::new();
        let mut field = "matrices";
        if let Some(ms) = &a.matrices {
            let dim = acted.abelian_group().map(|g| g.dim()).ok_or_else(|| e("matrices", "matrices need an abelian acted group".into()))?;
            for m in ms {
                let m = matrix(m, dim).map_err(|s| e("matrices", s))?;
                images.push(Automorphism::matrix(&acted, m).map_err(|x| e("matrices", x.to_string()))?);
            }
        } else if let Some(qs) = &a.scalars {
            field = "scalars";
            for q in qs {
                let q = rational(q).map_err(|s| e("scalars", s))?;
                images.push(Automorphism::scalar(q).map_err(|x| e("scalars", x.to_string()))?);
            }
        } else if let Some(ps) = &a.permutations {
            field = "permutations";
            for p in ps {
                images.push(Automorphism::permutation(&acted, p.clone()).map_err(|x| e("permutations", x.to_string()))?);
            }
        } else {
            return Ok(GroupAction::trivial(actor, acted));
        }
        match &actor {
            Carrier::Finite(_) => {
                let gens = a
                    .generators
                    .as_ref()
                    .ok_or_else(|| e("generators", "a finite acting group needs the list of generating elements".into()))?;
                GroupAction::by_finite_generators(actor.clone(), acted, gens, images).map_err(|x| e(field, x.to_string()))
            }
            _ => GroupAction::by_generators(actor.clone(), acted, images).map_err(|x| e(field, x.to_string())),
        }
    }

    fn build_semidirect(&self, name: &str, g: &RawGroup, loc: &Locator) -> CliResult<SemidirectGroup> {
        let need = |field: &str, v: &Option<String>| -> CliResult<String> {
            v.clone().ok_or_else(|| loc.err("group", name, field, format!("missing field '{field}'")))
        };
        let x = self.lookup(loc, "group", name, "kernel", &need("kernel", &g.kernel)?)?.clone();
        let b = self.lookup(loc, "group", name, "quotient", &need("quotient", &g.quotient)?)?.clone();
        let action = match &g.action {
            Some(a) => self
                .actions
                .get(a)
                .cloned()
                .ok_or_else(|| loc.err("group", name, "action", format!("unknown action '{a}'")))?,
            None => GroupAction::trivial(b.carrier().clone(), x.carrier().clone()),
        };
        let policy = match &g.cone {
            None => ConePolicy::Lex,
            Some(ConeSpec::Name(s)) if s == "lex" => ConePolicy::Lex,
            Some(ConeSpec::Name(s)) if s == "prod" => ConePolicy::Prod,
            Some(ConeSpec::Name(s)) if s == "half-plane" => {
                let alpha = g
                    .alpha
                    .as_ref()
                    .ok_or_else(|| loc.err("group", name, "alpha", "half-plane cones need 'alpha'"))?;
                let a = rational(alpha).map_err(|m| loc.err("group", name, "alpha", m))?;
                ConePolicy::Custom(Cone::HalfPlane {
                    num: a.numer().clone(),
                    den: a.denom().clone(),
                })
            }
            Some(_) => return Err(loc.err("group", name, "cone", "semidirect cones are 'lex', 'prod' or 'half-plane'")),
        };
        SemidirectGroup::new(x, b, action, policy).map_err(|e| loc.err("group", name, "action", e.to_string()))
    }

    fn build_morphism(&self, name: &str, m: &RawMorphism, loc: &Locator) -> CliResult<Morphism> {
        let s = self.lookup(loc, "morphism", name, "source", &m.source)?.clone();
        let t = self.lookup(loc, "morphism", name, "target", &m.target)?.clone();
        let e = |field: &str, msg: String| loc.err("morphism", name, field, msg);
        let (field, map) = if let Some(tab) = &m.table {
            ("table", HomMap::Table(std::sync::Arc::new(tab.clone())))
        } else if let Some(rows) = &m.matrix {
            let cols = t
                .carrier()
                .abelian_group()
                .map(|g| g.dim())
                .ok_or_else(|| e("matrix", "matrices need an abelian target".into()))?;
            ("matrix", HomMap::Matrix(matrix(rows, cols).map_err(|x| e("matrix", x))?))
        } else if let Some(imgs) = &m.images {
            let els: Vec<Element> = imgs
                .iter()
                .map(|x| parse_element(t.carrier(), x))
                .collect::<CliResult<_>>()
                .map_err(|x| e("images", x.to_string()))?;
            ("images", HomMap::Generators(std::sync::Arc::new(els)))
        } else if let Some(q) = &m.scalar {
            ("scalar", HomMap::Scalar(rational(q).map_err(|x| e("scalar", x))?))
        } else {
            let map = match m.map.as_deref() {
                Some("identity") => HomMap::Identity,
                Some("zero") => HomMap::Zero,
                Some("inject-kernel") => HomMap::InjectKernel,
                Some("inject-quotient") => HomMap::InjectQuotient,
                Some("project-kernel") => HomMap::ProjectKernel,
                Some("project-quotient") => HomMap::ProjectQuotient,
                Some(other) => return Err(e("map", format!("unknown map '{other}'"))),
                None => return Err(e("map", "give one of 'table', 'matrix', 'images', 'scalar' or 'map'".into())),
            };
            ("map", map)
        };
        Morphism::new(s, t, map).map_err(|x| e(field, x.to_string()))
    }
}

fn build_group(name: &str, g: &RawGroup, bound: u64, loc: &Locator) -> CliResult<RPGroup> {
    let e = |field: &str, m: String| loc.err("group", name, field, m);
    let cone_name = |default: &str| -> CliResult<String> {
        match &g.cone {
            None => Ok(default.to_string()),
            Some(ConeSpec::Name(s)) => Ok(s.clone()),
            Some(ConeSpec::Indices(_) | ConeSpec::Labels(_)) => {
                Err(e("cone", "element lists are only valid for finite groups".into()))
            }
        }
    };
    let group = match g.kind.as_str() {
        "builtin" => match g.set.as_deref() {
            Some("Z") => {
                let z = Carrier::integers();
                let cone = match cone_name("natural")?.as_str() {
                    "trivial" => Cone::Trivial,
                    "natural" => Cone::Orthant,
                    "total" => Cone::Total,
                    "generated" => generated(&z, g, bound, loc, name)?,
                    other => return Err(e("cone", format!("unknown cone '{other}' for Z"))),
                };
                RPGroup::new(z, cone).map_err(|x| e("cone", x.to_string()))?
            }
            Some("Q") => {
                let cone = match cone_name("nonneg")?.as_str() {
                    "trivial" => Cone::Trivial,
                    "nonneg" => Cone::Orthant,
                    "total" => Cone::Total,
                    other => return Err(e("cone", format!("unknown cone '{other}' for Q"))),
                };
                RPGroup::new(Carrier::Rational, cone).map_err(|x| e("cone", x.to_string()))?
            }
            other => return Err(e("set", format!("builtin set must be \"Z\" or \"Q\", found {other:?}"))),
        },
        "abelian" => {
            let torsion: Vec<BigInt> = g
                .torsion
                .iter()
                .flatten()
                .map(big)
                .collect::<Result<_, _>>()
                .map_err(|m| e("torsion", m))?;
            let ag = FgAbelianGroup::new(g.rank.unwrap_or(0), torsion).map_err(|x| e("torsion", x.to_string()))?;
            let c = Carrier::abelian(ag);
            let cone = match cone_name("trivial")?.as_str() {
                "trivial" => Cone::Trivial,
                "total" => Cone::Total,
                "orthant" => Cone::Orthant,
                "generated" => generated(&c, g, bound, loc, name)?,
                other => return Err(e("cone", format!("unknown cone '{other}'"))),
            };
            RPGroup::new(c, cone).map_err(|x| e("cone", x.to_string()))?
        }
        "finite" => {
            let table = g.table.clone().ok_or_else(|| e("table", "finite groups need an operation table".into()))?;
            let n = table.len();
            let t = match &g.labels {
                Some(l) => FiniteGroupTable::from_table_labeled(table, l.clone()),
                None => FiniteGroupTable::from_table(table),
            }
            .map_err(|x| e("table", x.to_string()))?;
            // Indices refer to the table as written; map them through the labels.
            let labels: Vec<String> = match &g.labels {
                Some(l) => l.clone(),
                None => (0..n).map(|i| i.to_string()).collect(),
            };
            let cone: Vec<usize> = match &g.cone {
                None => vec![t.identity()],
                Some(ConeSpec::Indices(v)) => v.clone(),
                Some(ConeSpec::Labels(v)) => v
                    .iter()
                    .map(|l| labels.iter().position(|x| x == l).ok_or_else(|| e("cone", format!("unknown element '{l}'"))))
                    .collect::<CliResult<_>>()?,
                Some(ConeSpec::Name(s)) if s == "trivial" => vec![t.identity()],
                Some(ConeSpec::Name(s)) if s == "total" => (0..n).collect(),
                Some(ConeSpec::Name(s)) => return Err(e("cone", format!("unknown cone '{s}' for a finite group"))),
            };
            let mut idx = Vec::new();
            for c in cone {
                let label = labels.get(c).ok_or_else(|| e("cone", format!("index {c} out of range")))?;
                idx.push(t.index_of_label(label).expect("label present"));
            }
            RPGroup::finite(t, &idx).map_err(|x| e("cone", x.to_string()))?
        }
        other => return Err(e("kind", format!("unknown group kind '{other}'"))),
    };
    Ok(group.with_bound(bound))
}

fn generated(c: &Carrier, g: &RawGroup, bound: u64, loc: &Locator, name: &str) -> CliResult<Cone> {
    let gens = g
        .generators
        .as_ref()
        .ok_or_else(|| loc.err("group", name, "generators", "generated cones need 'generators'"))?;
    let els: Vec<Element> = gens
        .iter()
        .map(|x| gen_element(c, x))
        .collect::<Result<_, _>>()
        .map_err(|m| loc.err("group", name, "generators", m))?;
    Cone::generated(c, &els, bound).map_err(|x| loc.err("group", name, "generators", x.to_string()))
}

/// Parses an element of a carrier: `3` or a label for finite groups,
/// `1,0` for abelian groups, `p/q` for `Q`, and `x; b` for semidirect products.
pub fn parse_element(c: &Carrier, s: &str) -> CliResult<Element> {
    let bad = |m: &str| CliError::Usage(format!("cannot read element '{s}': {m}"));
    let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
    let e = match c {
        Carrier::Finite(tab) => match tab.index_of_label(t) {
            Some(i) => Element::Index(i),
            None => Element::Index(t.trim_start_matches('#').parse().map_err(|_| bad("not an index or label"))?),
        },
        Carrier::Abelian(_) => Element::Vector(
            t.split(',')
                .map(|p| p.trim().parse::<BigInt>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad("expected comma-separated integers"))?,
        ),
        Carrier::Rational => Element::Rational(parse_rational(t).map_err(|m| bad(&m))?),
        Carrier::Semidirect(sd) => {
            let (x, b) = t.split_once(';').ok_or_else(|| bad("expected 'x; b'"))?;
            Element::pair(parse_element(&sd.kernel, x)?, parse_element(&sd.quotient, b)?)
        }
    };
    c.check(&e).map_err(|x| bad(&x.to_string()))?;
    Ok(c.normalize(&e))
}
