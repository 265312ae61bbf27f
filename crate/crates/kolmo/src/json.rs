//! JSON formats for objects, morphisms and compatible families.
//!
//! Objects are written as
//!
//! * a string `"X*Y"` naming previously bound objects (`"I"` is the unit),
//! * an array containing arrays or objects, read as the tensor product of
//!   its entries (`[]` is the unit),
//! * anything else, read as a single atom by the instance.
//!
//! Atoms per instance:
//!
//! | instance   | atom                                                          |
//! |------------|---------------------------------------------------------------|
//! | finstoch   | `["a", "b"]` labels, or `3` for `{0, 1, 2}`                   |
//! | setmulti   | same as finstoch                                              |
//! | vietoris   | `{"points": [..], "opens": [[..], ..]}`, `{"discrete": n}`, `{"indiscrete": n}`, `{"builtin": "sierpinski"}` |
//! | cringplus  | `["s", "t"]` variable names                                   |
//!
//! Morphisms are objects with `"dom"` (default: unit) and `"cod"` plus one
//! body field:
//!
//! * finstoch: `"rows": [["1/2", "1/2"], ..]`, `"function": {"a": "x"}`,
//!   or `"state": ["1/3", "2/3"]`;
//! * setmulti, vietoris: `"image": {"a": ["x", "y"]}` or `"function"`;
//! * cringplus: `"table": {"t^2": "t + 1"}` with `"default"` one of
//!   `"identity"`, `"unit"`, `"zero"`; keys are monomials over `cod`,
//!   values polynomials over `dom`.
//!
//! `{"builtin": "name"}` refers to an instance builtin. Elements of tensor
//! products are addressed by comma-joined labels (`"a,x"`); the unit's only
//! element is `"*"`. Probabilities are exact: `"1/3"`, `"0.25"`, `1`.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use kolmo_core::cringplus::{self, var_names, CRingPlus, CringMap, PolyRing, Poly, TableDefault};
use kolmo_core::finstoch::{element_index, FinSet, FinStoch, StochMatrix};
use kolmo_core::kernel::diagram::Env;
use kolmo_core::projective::{
    diagonal_family, iid_family, independent_family, joint_family, product_family, regroup_family,
    CompatibleFamily, IndexSet, Label,
};
use kolmo_core::setmulti::{MultiMap, SetMulti};
use kolmo_core::vietoris::{continuity_check, point_index, ClosedSetMap, FiniteTopSpace, Vietoris};
use kolmo_core::{CheckReport, MarkovCategory, Obj, Q};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LoadError {
    #[error("{0}")]
    Invalid(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    Core(#[from] kolmo_core::Error),
}

pub type Result<T> = std::result::Result<T, LoadError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(LoadError::Invalid(msg.into()))
}

/// Which instance a script runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum InstanceKind {
    FinStoch,
    SetMulti,
    Vietoris,
    /// With the equality degree bound.
    CRingPlus(u32),
}

impl InstanceKind {
    pub fn name(&self) -> &'static str {
        match self {
            InstanceKind::FinStoch => "finstoch",
            InstanceKind::SetMulti => "setmulti",
            InstanceKind::Vietoris => "vietoris",
            InstanceKind::CRingPlus(_) => "cringplus",
        }
    }
}

/// A Markov category that can be driven from scripts.
pub trait Instance:
    MarkovCategory<Atom: Send + Sync, Morphism: Send + Sync> + Clone + Send + Sync + 'static
{
    fn atom(&self, v: &Value) -> Result<Self::Atom>;

    /// The body of a morphism whose `dom` and `cod` have been resolved.
    fn body(&self, dom: Obj<Self::Atom>, cod: Obj<Self::Atom>, v: &Map<String, Value>) -> Result<Self::Morphism>;

    fn builtin(&self, _name: &str) -> Option<Self::Morphism> {
        None
    }

    /// Instance-specific well-formedness beyond the category operations.
    fn continuity(&self, _m: &Self::Morphism) -> Option<CheckReport> {
        None
    }
}

/// Names bound while loading a script.
pub struct Scope<C: Instance> {
    pub cat: C,
    pub objects: BTreeMap<String, Obj<C::Atom>>,
    pub morphisms: Env<C::Morphism>,
    pub families: BTreeMap<String, CompatibleFamily<C>>,
}

impl<C: Instance> Clone for Scope<C> {
    fn clone(&self) -> Self {
        Scope {
            cat: self.cat.clone(),
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            families: self.families.clone(),
        }
    }
}

impl<C: Instance> Scope<C> {
    pub fn new(cat: C) -> Self {
        Scope {
            cat,
            objects: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            families: BTreeMap::new(),
        }
    }

    /// Resolves `"X*Y"`; `"I"` is the unit.
    pub fn named_object(&self, expr: &str) -> Result<Obj<C::Atom>> {
        let expr = expr.trim();
        if expr == "I" {
            return Ok(Obj::unit());
        }
        let mut out = Obj::unit();
        for name in expr.split('*').map(str::trim) {
            let o = self
                .objects
                .get(name)
                .ok_or_else(|| LoadError::UnknownName(name.into()))?;
            out = out.tensor(o);
        }
        Ok(out)
    }

    pub fn object(&self, v: &Value) -> Result<Obj<C::Atom>> {
        match v {
            Value::String(s) => self.named_object(s),
            Value::Array(items) if items.is_empty() || items.iter().any(|i| i.is_array() || i.is_object()) => {
                let mut out = Obj::unit();
                for i in items {
                    out = out.tensor(&self.object(i)?);
                }
                Ok(out)
            }
            _ => Ok(Obj::atom(self.cat.atom(v)?)),
        }
    }

    /// A morphism name or an inline morphism.
    pub fn morphism(&self, v: &Value) -> Result<C::Morphism> {
        match v {
            Value::String(name) => self
                .morphisms
                .get(name)
                .cloned()
                .ok_or_else(|| LoadError::UnknownName(name.clone())),
            Value::Object(map) => {
                if let Some(b) = map.get("builtin") {
                    let name = b.as_str().ok_or_else(|| LoadError::Invalid("builtin name must be a string".into()))?;
                    return self
                        .cat
                        .builtin(name)
                        .ok_or_else(|| LoadError::UnknownName(format!("builtin {name}")));
                }
                let dom = match map.get("dom") {
                    Some(d) => self.object(d)?,
                    None => Obj::unit(),
                };
                let cod = self.object(map.get("cod").ok_or_else(|| LoadError::Invalid("morphism needs a `cod`".into()))?)?;
                self.cat.body(dom, cod, map)
            }
            _ => invalid(format!("expected a morphism, found {v}")),
        }
    }

    pub fn family(&self, v: &Value) -> Result<CompatibleFamily<C>> {
        if let Value::String(name) = v {
            return self
                .families
                .get(name)
                .cloned()
                .ok_or_else(|| LoadError::UnknownName(name.clone()));
        }
        let map = v.as_object().ok_or_else(|| LoadError::Invalid(format!("expected a family, found {v}")))?;
        let field = |k: &str| map.get(k).ok_or_else(|| LoadError::Invalid(format!("family needs `{k}`")));
        let kind = field("kind")?.as_str().unwrap_or_default();
        let index = || map.get("index").map_or(Ok(IndexSet::Naturals), index_set);
        Ok(match kind {
            "iid" => iid_family(&self.cat, self.morphism(field("q")?)?, index()?),
            "diagonal" => diagonal_family(&self.cat, self.morphism(field("q")?)?, index()?),
            "independent" => {
                let domain = self.object(field("domain")?)?;
                let mut table = BTreeMap::new();
                if let Some(fs) = map.get("factors") {
                    let fs = fs.as_object().ok_or_else(|| LoadError::Invalid("`factors` must map labels to morphisms".into()))?;
                    for (l, m) in fs {
                        table.insert(Label::parse(l)?, self.morphism(m)?);
                    }
                }
                let default = self.morphism(field("default")?)?;
                for m in table.values().chain([&default]) {
                    if self.cat.dom(m) != &domain {
                        return invalid(format!("factor starts at {}, expected {domain}", self.cat.dom(m)));
                    }
                }
                let rule = Arc::new(move |l: &Label| table.get(l).unwrap_or(&default).clone());
                independent_family(&self.cat, domain, index()?, rule)
            }
            "product" => product_family(&self.family(field("left")?)?, &self.family(field("right")?)?)?,
            "regroup" => {
                let groups = field("groups")?
                    .as_array()
                    .ok_or_else(|| LoadError::Invalid("`groups` must be an array".into()))?
                    .iter()
                    .map(|g| self.family(g))
                    .collect::<Result<Vec<_>>>()?;
                regroup_family(groups)?
            }
            "table" => {
                let labels = labels(field("labels")?)?;
                let factors = field("factors")?
                    .as_array()
                    .ok_or_else(|| LoadError::Invalid("`factors` must be an array".into()))?
                    .iter()
                    .map(|f| self.object(f))
                    .collect::<Result<Vec<_>>>()?;
                joint_family(&self.cat, labels, factors, self.morphism(field("joint")?)?)?
            }
            other => return invalid(format!("unknown family kind `{other}`")),
        })
    }
}

pub fn label(v: &Value) -> Result<Label> {
    match v {
        Value::String(s) => Ok(Label::parse(s)?),
        Value::Number(n) => n
            .as_u64()
            .and_then(|n| u32::try_from(n).ok())
            .map(Label::nat)
            .ok_or_else(|| LoadError::Invalid(format!("bad label {n}"))),
        _ => invalid(format!("bad label {v}")),
    }
}

pub fn labels(v: &Value) -> Result<Vec<Label>> {
    v.as_array()
        .ok_or_else(|| LoadError::Invalid(format!("expected a label list, found {v}")))?
        .iter()
        .map(label)
        .collect()
}

/// `"naturals"`, `{"range": n}`, `{"finite": [..]}`,
/// `{"arithmetic": {"start": a, "step": d}}`, `{"tagged": {"tag": t, "inner": ..}}`,
/// `{"union": [..]}`.
pub fn index_set(v: &Value) -> Result<IndexSet> {
    if v.as_str() == Some("naturals") {
        return Ok(IndexSet::Naturals);
    }
    let map = v.as_object().filter(|m| m.len() == 1).ok_or_else(|| LoadError::Invalid(format!("bad index set {v}")))?;
    let (k, body) = map.iter().next().expect("one entry");
    let num = |x: &Value, what: &str| {
        x.as_u64()
            .and_then(|n| u32::try_from(n).ok())
            .ok_or_else(|| LoadError::Invalid(format!("`{what}` must be a small natural number")))
    };
    Ok(match k.as_str() {
        "range" => IndexSet::range(num(body, "range")?),
        "finite" => IndexSet::finite(labels(body)?)?,
        "arithmetic" => {
            let step = num(&body["step"], "step")?;
            if step == 0 {
                return invalid("arithmetic index needs step ≥ 1");
            }
            IndexSet::Arithmetic {
                start: num(&body["start"], "start")?,
                step,
            }
        }
        "tagged" => IndexSet::Tagged {
            tag: num(&body["tag"], "tag")?,
            inner: Box::new(index_set(&body["inner"])?),
        },
        "union" => IndexSet::Union(
            body.as_array()
                .ok_or_else(|| LoadError::Invalid("`union` must be an array".into()))?
                .iter()
                .map(index_set)
                .collect::<Result<_>>()?,
        ),
        other => return invalid(format!("unknown index set `{other}`")),
    })
}

/// Exact rational from `"p/q"`, a decimal such as `"0.25"`, or an integer.
pub fn rational(v: &Value) -> Result<Q> {
    let s = match v {
        Value::String(s) => s.trim().to_string(),
        Value::Number(n) => n.to_string(),
        _ => return invalid(format!("expected a probability, found {v}")),
    };
    parse_rational(&s).ok_or_else(|| LoadError::Invalid(format!("bad rational `{s}`")))
}

pub fn parse_rational(s: &str) -> Option<Q> {
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let whole = Q::from_str(if int.is_empty() || int == "-" { "0" } else { int }).ok()?;
        let digits = Q::from_str(frac).ok()?;
        let scale = Q::from_str(&format!("1{}", "0".repeat(frac.len()))).ok()?;
        let part = digits / scale;
        return Some(if negative { whole - part } else { whole + part });
    }
    Q::from_str(s).ok()
}

fn finset(v: &Value) -> Result<FinSet> {
    match v {
        Value::Number(n) => {
            let n = n.as_u64().ok_or_else(|| LoadError::Invalid(format!("bad set size {n}")))?;
            Ok(FinSet::range(n as usize)?)
        }
        Value::Array(items) => {
            let names = items
                .iter()
                .map(|i| match i {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => invalid(format!("bad element label {i}")),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(FinSet::new(names)?)
        }
        _ => invalid(format!("expected a finite set, found {v}")),
    }
}

fn object_field<'a>(v: &'a Map<String, Value>, k: &str) -> Result<&'a Map<String, Value>> {
    v.get(k)
        .and_then(Value::as_object)
        .ok_or_else(|| LoadError::Invalid(format!("`{k}` must be an object")))
}

fn string_list(v: &Value) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| LoadError::Invalid(format!("expected a list of labels, found {v}")))?
        .iter()
        .map(|i| match i {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => invalid(format!("bad label {i}")),
        })
        .collect()
}

/// Reads a `{"label": value}` table that must cover every element of `dom`.
fn total_table<T>(
    table: &Map<String, Value>,
    count: usize,
    index: impl Fn(&str) -> kolmo_core::Result<usize>,
    read: impl Fn(&Value) -> Result<T>,
) -> Result<Vec<T>> {
    let mut out: Vec<Option<T>> = (0..count).map(|_| None).collect();
    for (k, v) in table {
        let i = index(k)?;
        if out[i].is_some() {
            return invalid(format!("element `{k}` listed twice"));
        }
        out[i] = Some(read(v)?);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| LoadError::Invalid(format!("element {i} of the domain has no entry"))))
        .collect()
}

impl Instance for FinStoch {
    fn atom(&self, v: &Value) -> Result<FinSet> {
        finset(v)
    }

    fn body(&self, dom: Obj<FinSet>, cod: Obj<FinSet>, v: &Map<String, Value>) -> Result<StochMatrix> {
        let n = kolmo_core::finstoch::card(&dom);
        if let Some(rows) = v.get("rows") {
            let rows = rows
                .as_array()
                .ok_or_else(|| LoadError::Invalid("`rows` must be an array".into()))?
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| LoadError::Invalid("each row must be an array".into()))?
                        .iter()
                        .map(rational)
                        .collect::<Result<Vec<Q>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(StochMatrix::new(dom, cod, rows)?);
        }
        if let Some(probs) = v.get("state") {
            if !dom.is_unit() {
                return invalid("`state` needs the unit domain");
            }
            let probs = probs
                .as_array()
                .ok_or_else(|| LoadError::Invalid("`state` must be an array".into()))?
                .iter()
                .map(rational)
                .collect::<Result<Vec<Q>>>()?;
            return Ok(StochMatrix::state(&cod, probs)?);
        }
        if v.contains_key("function") {
            let table = total_table(object_field(v, "function")?, n, |l| element_index(&dom, l), |y| {
                let y = y.as_str().ok_or_else(|| LoadError::Invalid(format!("bad element {y}")))?;
                Ok(element_index(&cod, y)?)
            })?;
            return Ok(StochMatrix::from_function(dom, cod, |x| table[x]));
        }
        invalid("finstoch morphism needs `rows`, `state` or `function`")
    }
}

fn images(
    v: &Map<String, Value>,
    n: usize,
    dom_index: impl Fn(&str) -> kolmo_core::Result<usize>,
    cod_index: impl Fn(&str) -> kolmo_core::Result<usize>,
) -> Result<Vec<Vec<usize>>> {
    if v.contains_key("image") {
        total_table(object_field(v, "image")?, n, dom_index, |ys| {
            string_list(ys)?
                .iter()
                .map(|y| Ok(cod_index(y)?))
                .collect()
        })
    } else if v.contains_key("function") {
        total_table(object_field(v, "function")?, n, dom_index, |y| {
            let y = y.as_str().ok_or_else(|| LoadError::Invalid(format!("bad element {y}")))?;
            Ok(vec![cod_index(y)?])
        })
    } else {
        invalid("morphism needs `image` or `function`")
    }
}

impl Instance for SetMulti {
    fn atom(&self, v: &Value) -> Result<FinSet> {
        finset(v)
    }

    fn body(&self, dom: Obj<FinSet>, cod: Obj<FinSet>, v: &Map<String, Value>) -> Result<MultiMap> {
        let n = kolmo_core::finstoch::card(&dom);
        let imgs = images(v, n, |l| element_index(&dom, l), |l| element_index(&cod, l))?;
        Ok(MultiMap::new(dom, cod, imgs)?)
    }
}

impl Instance for Vietoris {
    fn atom(&self, v: &Value) -> Result<FiniteTopSpace> {
        let map = v.as_object().ok_or_else(|| LoadError::Invalid(format!("expected a space, found {v}")))?;
        let size = |k: &str| {
            map[k]
                .as_u64()
                .filter(|&n| (1..=16).contains(&n))
                .map(|n| n as usize)
                .ok_or_else(|| LoadError::Invalid(format!("`{k}` must be between 1 and 16")))
        };
        if map.contains_key("discrete") {
            return Ok(FiniteTopSpace::discrete(size("discrete")?));
        }
        if map.contains_key("indiscrete") {
            return Ok(FiniteTopSpace::indiscrete(size("indiscrete")?));
        }
        if let Some(b) = map.get("builtin") {
            return match b.as_str() {
                Some("sierpinski") => Ok(FiniteTopSpace::sierpinski()),
                _ => invalid(format!("unknown space {b}")),
            };
        }
        let points = finset(map.get("points").ok_or_else(|| LoadError::Invalid("space needs `points`".into()))?)?;
        let opens = match map.get("opens") {
            Some(Value::Array(os)) => os
                .iter()
                .map(|o| {
                    string_list(o)?
                        .iter()
                        .map(|l| points.index_of(l).ok_or_else(|| LoadError::UnknownName(l.clone())))
                        .collect::<Result<Vec<usize>>>()
                })
                .collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
            Some(other) => return invalid(format!("`opens` must be an array, found {other}")),
        };
        Ok(FiniteTopSpace::from_opens(points, opens)?.0)
    }

    fn body(&self, dom: Obj<FiniteTopSpace>, cod: Obj<FiniteTopSpace>, v: &Map<String, Value>) -> Result<ClosedSetMap> {
        let n = dom.atoms().iter().map(FiniteTopSpace::len).product();
        let imgs = images(v, n, |l| point_index(&dom, l), |l| point_index(&cod, l))?;
        Ok(ClosedSetMap::new(dom, cod, imgs)?)
    }

    fn continuity(&self, m: &ClosedSetMap) -> Option<CheckReport> {
        Some(continuity_check(m))
    }
}

impl Instance for CRingPlus {
    fn atom(&self, v: &Value) -> Result<PolyRing> {
        Ok(PolyRing::new(string_list(v)?)?)
    }

    fn body(&self, dom: Obj<PolyRing>, cod: Obj<PolyRing>, v: &Map<String, Value>) -> Result<CringMap> {
        let default = match v.get("default").and_then(Value::as_str) {
            None | Some("identity") => TableDefault::Identity,
            Some("unit") => TableDefault::Unit,
            Some("zero") => TableDefault::Zero,
            Some(other) => return invalid(format!("unknown default `{other}`")),
        };
        let (dn, cn) = (var_names(&dom), var_names(&cod));
        let mut table = BTreeMap::new();
        for (k, p) in object_field(v, "table")? {
            let key = Poly::parse(k, &cn)?;
            let mut terms = key.terms();
            let mono = match (terms.next(), terms.next()) {
                (Some((m, c)), None) if *c == 1.into() => m.clone(),
                _ => return invalid(format!("table key `{k}` is not a monomial")),
            };
            let p = p.as_str().map(str::to_string).unwrap_or_else(|| p.to_string());
            table.insert(mono, Poly::parse(&p, &dn)?);
        }
        let name = v.get("name").and_then(Value::as_str).unwrap_or("table").to_string();
        Ok(CringMap::from_table(dom, cod, name, table, default)?)
    }

    fn builtin(&self, name: &str) -> Option<CringMap> {
        cringplus::builtin(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kolmo_core::q;
    use serde_json::json;

    #[test]
    fn rationals() {
        assert_eq!(rational(&json!("1/3")).unwrap(), q(1, 3));
        assert_eq!(rational(&json!("0.25")).unwrap(), q(1, 4));
        assert_eq!(rational(&json!(0.3)).unwrap(), q(3, 10));
        assert_eq!(rational(&json!(1)).unwrap(), q(1, 1));
        assert_eq!(rational(&json!("-.5")).unwrap(), q(-1, 2));
        assert!(rational(&json!("x")).is_err());
        assert!(rational(&json!(true)).is_err());
    }

    #[test]
    fn finstoch_objects_and_morphisms() {
        let mut s = Scope::new(FinStoch);
        s.objects.insert("X".into(), s.object(&json!(["a", "b"])).unwrap());
        s.objects.insert("Y".into(), s.object(&json!(3)).unwrap());
        let xy = s.object(&json!("X*Y")).unwrap();
        assert_eq!(xy.len(), 2);
        assert_eq!(s.object(&json!([["a"], 2])).unwrap().len(), 2);
        assert!(s.object(&json!("I")).unwrap().is_unit());
        assert!(matches!(s.object(&json!("Z")), Err(LoadError::UnknownName(_))));

        let m = s
            .morphism(&json!({"dom": "X", "cod": "Y", "rows": [["1/2", "1/2", 0], [0, 0, 1]]}))
            .unwrap();
        assert_eq!(m.entry(0, 1), &q(1, 2));
        let f = s.morphism(&json!({"dom": "X", "cod": "X", "function": {"a": "b", "b": "b"}})).unwrap();
        assert_eq!(f.entry(0, 1), &q(1, 1));
        let p = s.morphism(&json!({"cod": "X", "state": ["1/3", "2/3"]})).unwrap();
        assert!(p.dom().is_unit());

        // rows that do not sum to one are a loader error
        let bad = s.morphism(&json!({"dom": "X", "cod": "X", "rows": [["1/2", "1/3"], [0, 1]]}));
        assert!(matches!(bad, Err(LoadError::Core(_))));
        let partial = s.morphism(&json!({"dom": "X", "cod": "X", "function": {"a": "b"}}));
        assert!(partial.is_err());
    }

    #[test]
    fn setmulti_and_vietoris() {
        let mut s = Scope::new(SetMulti);
        s.objects.insert("X".into(), s.object(&json!(["0", "1"])).unwrap());
        let m = s
            .morphism(&json!({"dom": "X*X", "cod": "X", "image": {"0,0": ["0"], "0,1": ["0", "1"], "1,0": ["1"], "1,1": ["1"]}}))
            .unwrap();
        assert_eq!(m.image(1).count_ones(..), 2);

        let mut v = Scope::new(Vietoris);
        v.objects.insert("S".into(), v.object(&json!({"builtin": "sierpinski"})).unwrap());
        let s2 = v.object(&json!({"points": ["0", "1"], "opens": [["1"]]})).unwrap();
        assert_eq!(s2, v.named_object("S").unwrap());
        // {1} is open, so not closed
        let bad = v.morphism(&json!({"dom": "S", "cod": "S", "image": {"1": ["1"], "0": ["0"]}}));
        assert!(bad.is_err());
        let ok = v.morphism(&json!({"dom": "S", "cod": "S", "image": {"1": ["0", "1"], "0": ["0"]}})).unwrap();
        assert!(Vietoris.continuity(&ok).unwrap().passed);
    }

    #[test]
    fn cring_tables_and_builtins() {
        let mut s = Scope::new(CRingPlus::new(6));
        s.objects.insert("R".into(), s.object(&json!(["t"])).unwrap());
        let m = s
            .morphism(&json!({"dom": "R", "cod": "R", "table": {"t": "1", "t^2": "t^2"}, "default": "identity"}))
            .unwrap();
        assert_eq!(m.apply_monomial(&[1]), Poly::one(1));
        let f = s.morphism(&json!({"builtin": "f"})).unwrap();
        assert_eq!(f.apply_monomial(&[3]), Poly::monomial(vec![2]));
        assert!(s.morphism(&json!({"builtin": "nope"})).is_err());
        let not_unital = s.morphism(&json!({"dom": "R", "cod": "R", "table": {"1": "t"}}));
        assert!(not_unital.is_err());
    }

    #[test]
    fn families() {
        let mut s = Scope::new(FinStoch);
        s.objects.insert("B".into(), s.object(&json!(["0", "1"])).unwrap());
        let coin = s.morphism(&json!({"cod": "B", "state": ["1/2", "1/2"]})).unwrap();
        s.morphisms.insert("coin".into(), coin);
        let iid = s.family(&json!({"kind": "iid", "q": "coin"})).unwrap();
        assert_eq!(iid.index(), &IndexSet::Naturals);
        s.families.insert("iid".into(), iid);
        let tagged = json!({"kind": "iid", "q": "coin", "index": {"tagged": {"tag": 1, "inner": "naturals"}}});
        let p = s.family(&json!({"kind": "product", "left": "iid", "right": tagged})).unwrap();
        assert_eq!(p.window(2), vec![Label::nat(0), Label::tagged(1, &Label::nat(0))]);
        assert!(s.family(&json!({"kind": "product", "left": "iid", "right": "iid"})).is_err());
        let table = s
            .family(&json!({"kind": "table", "labels": ["0", "1"], "factors": ["B", "B"],
                "joint": {"cod": "B*B", "state": ["1/2", 0, 0, "1/2"]}}))
            .unwrap();
        assert!(table.index().is_finite());
        let indep = s
            .family(&json!({"kind": "independent", "domain": "I", "default": "coin",
                "factors": {"2": {"cod": "B", "state": [1, 0]}}}))
            .unwrap();
        assert_eq!(indep.assign(&[Label::nat(2)]).unwrap().entry(0, 0), &q(1, 1));
        assert!(index_set(&json!({"arithmetic": {"start": 1, "step": 0}})).is_err());
        assert_eq!(index_set(&json!({"range": 2})).unwrap(), IndexSet::range(2));
    }
}
