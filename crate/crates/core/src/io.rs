//! File formats: posets, labelings, first atom sets, complexes, chain orders
//! and atom ordering certificates.
//!
//! Every parser returns an error on malformed input and never panics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chain::{validate_root, Chain, Limits};
use crate::error::{Error, Result};
use crate::labeling::CeLabeling;
use crate::poset::Poset;
use crate::rao::RaoTree;
use crate::relabel::MaxChainOrder;
use crate::rfas::{AtomDefault, FirstAtomSet};
use crate::shelling::OrderComplex;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct PosetDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    comment: Option<String>,
    elements: Vec<String>,
    covers: Vec<(String, String)>,
}

pub fn parse_poset(s: &str) -> Result<Poset> {
    let doc: PosetDoc = serde_json::from_str(s)?;
    Poset::build(&doc.elements, &doc.covers)
}

pub fn poset_to_json(p: &Poset) -> String {
    let doc = PosetDoc {
        comment: None,
        elements: p.names().to_vec(),
        covers: p
            .cover_pairs()
            .into_iter()
            .map(|(a, b)| (p.name(a).to_string(), p.name(b).to_string()))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("poset documents serialize")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelMode {
    Edge,
    ChainEdge,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PosetTarget {
    #[default]
    Given,
    Dual,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct LabelEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root: Option<Vec<String>>,
    from: String,
    to: String,
    label: i64,
}

/// A parsed labeling file, not yet bound to a poset.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LabelingDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    comment: Option<String>,
    mode: LabelMode,
    /// `dual` when the labels refer to the dual of the poset they ship with.
    #[serde(default)]
    poset: PosetTarget,
    labels: Vec<LabelEntry>,
}

impl LabelingDoc {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn on_dual(&self) -> bool {
        self.poset == PosetTarget::Dual
    }

    pub fn mode(&self) -> LabelMode {
        self.mode
    }

    /// Binds the labels to `p`, which must already be the poset they label.
    pub fn resolve(&self, p: &Poset, limits: &Limits) -> Result<CeLabeling> {
        match self.mode {
            LabelMode::Edge => {
                let mut map = BTreeMap::new();
                for e in &self.labels {
                    if e.root.is_some() {
                        return Err(Error::Parse("edge labels take no root".into()));
                    }
                    let (a, b) = cover(p, &e.from, &e.to)?;
                    if map.insert((a, b), e.label).is_some_and(|old| old != e.label) {
                        return Err(Error::Parse(format!(
                            "conflicting labels for {} < {}",
                            e.from, e.to
                        )));
                    }
                }
                CeLabeling::from_edge_labels(p, &map, limits)
            }
            LabelMode::ChainEdge => {
                crate::chain::check_budget(p, limits)?;
                let mut lab = CeLabeling::new();
                for e in &self.labels {
                    let names = e
                        .root
                        .as_ref()
                        .ok_or_else(|| Error::Parse("chain-edge labels need a root".into()))?;
                    let root = names.iter().map(|n| p.index_of(n)).collect::<Result<Vec<_>>>()?;
                    validate_root(p, &root)?;
                    let (a, b) = cover(p, &e.from, &e.to)?;
                    if root.last() != Some(&a) {
                        return Err(Error::InvalidRoot(format!(
                            "root of {} < {} must end at {}",
                            e.from, e.to, e.from
                        )));
                    }
                    if lab.get(&root, b).is_some_and(|old| old != e.label) {
                        return Err(Error::Parse(format!(
                            "conflicting labels for {} < {}",
                            e.from, e.to
                        )));
                    }
                    lab.insert(root, b, e.label);
                }
                lab.check_total(p)?;
                Ok(lab)
            }
        }
    }
}

fn cover(p: &Poset, from: &str, to: &str) -> Result<(usize, usize)> {
    let (a, b) = (p.index_of(from)?, p.index_of(to)?);
    if !p.covers(a, b) {
        return Err(Error::Parse(format!("`{from}` < `{to}` is not a cover relation")));
    }
    Ok((a, b))
}

/// Parses a labeling file and binds it to `p` as given.
pub fn parse_labeling(p: &Poset, s: &str, limits: &Limits) -> Result<CeLabeling> {
    LabelingDoc::parse(s)?.resolve(p, limits)
}

/// Chain-edge form of any labeling.
pub fn labeling_to_json(p: &Poset, lab: &CeLabeling, on_dual: bool) -> String {
    let labels = lab
        .entries()
        .into_iter()
        .map(|(root, to, label)| LabelEntry {
            root: Some(root.names(p)),
            from: p.name(root.top()).to_string(),
            to: p.name(to).to_string(),
            label,
        })
        .collect();
    let doc = LabelingDoc {
        comment: None,
        mode: LabelMode::ChainEdge,
        poset: if on_dual {
            PosetTarget::Dual
        } else {
            PosetTarget::Given
        },
        labels,
    };
    serde_json::to_string_pretty(&doc).expect("labeling documents serialize")
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum DefaultDoc {
    Leftmost,
    #[default]
    None,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct FirstAtomEntry {
    root: Vec<String>,
    x: String,
    y: String,
    atom: String,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RfasDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    comment: Option<String>,
    first_atoms: Vec<FirstAtomEntry>,
    #[serde(default)]
    default: DefaultDoc,
}

pub fn parse_rfas(p: &Poset, s: &str, limits: &Limits) -> Result<FirstAtomSet> {
    let doc: RfasDoc = serde_json::from_str(s)?;
    let mut entries = Vec::with_capacity(doc.first_atoms.len());
    for e in &doc.first_atoms {
        let root = e.root.iter().map(|n| p.index_of(n)).collect::<Result<Vec<_>>>()?;
        validate_root(p, &root)?;
        if root.last() != Some(&p.index_of(&e.x)?) {
            return Err(Error::InvalidRoot(format!("root does not end at `{}`", e.x)));
        }
        entries.push((root, p.index_of(&e.y)?, p.index_of(&e.atom)?));
    }
    let default = match doc.default {
        DefaultDoc::Leftmost => AtomDefault::Leftmost,
        DefaultDoc::None => AtomDefault::None,
    };
    FirstAtomSet::from_entries(p, &entries, default, limits)
}

pub fn rfas_to_json(p: &Poset, omega: &FirstAtomSet) -> String {
    let first_atoms = omega
        .entries()
        .into_iter()
        .map(|(root, y, atom)| FirstAtomEntry {
            x: p.name(root.top()).to_string(),
            root: root.names(p),
            y: p.name(y).to_string(),
            atom: p.name(atom).to_string(),
        })
        .collect();
    let doc = RfasDoc {
        comment: None,
        first_atoms,
        default: DefaultDoc::None,
    };
    serde_json::to_string_pretty(&doc).expect("first atom documents serialize")
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ComplexDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    comment: Option<String>,
    vertices: Vec<String>,
    facets: Vec<Vec<String>>,
}

pub fn parse_complex(s: &str) -> Result<OrderComplex> {
    let doc: ComplexDoc = serde_json::from_str(s)?;
    let index: BTreeMap<&str, usize> = doc
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let facets = doc
        .facets
        .iter()
        .map(|f| {
            f.iter()
                .map(|v| {
                    index
                        .get(v.as_str())
                        .copied()
                        .ok_or_else(|| Error::UnknownElement(v.clone()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    OrderComplex::new(doc.vertices, facets)
}

pub fn complex_to_json(k: &OrderComplex) -> String {
    let doc = ComplexDoc {
        comment: None,
        vertices: k.vertices().to_vec(),
        facets: (0..k.facets().len())
            .map(|f| k.facet_names(f).into_iter().map(String::from).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("complex documents serialize")
}

/// One chain per line, elements separated by commas or whitespace; braces,
/// blank lines and `#` comments are ignored.
pub fn parse_chain_order(p: &Poset, s: &str) -> Result<MaxChainOrder> {
    let mut chains = Vec::new();
    for line in s.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        let line = line.trim_start_matches('{').trim_end_matches('}');
        if line.trim().is_empty() {
            continue;
        }
        let chain = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| p.index_of(t))
            .collect::<Result<Vec<_>>>()?;
        chains.push(Chain(chain));
    }
    MaxChainOrder::new(p, chains)
}

pub fn chain_order_to_text(p: &Poset, order: &MaxChainOrder) -> String {
    let mut s = String::new();
    for c in order.chains() {
        s.push_str(&c.display(p));
        s.push('\n');
    }
    s
}

pub fn rao_tree_to_json(p: &Poset, t: &RaoTree) -> Value {
    json!({
        "element": p.name(t.element),
        "atoms": t.atoms.iter().map(|&a| p.name(a)).collect::<Vec<_>>(),
        "children": t.children.iter().map(|c| rao_tree_to_json(p, c)).collect::<Vec<_>>(),
    })
}

pub fn parse_rao_tree(p: &Poset, s: &str) -> Result<RaoTree> {
    let v: Value = serde_json::from_str(s)?;
    rao_tree_from_value(p, &v, 0)
}

fn rao_tree_from_value(p: &Poset, v: &Value, depth: usize) -> Result<RaoTree> {
    if depth > p.len() {
        return Err(Error::MalformedCertificate(
            "certificate is deeper than the poset".into(),
        ));
    }
    let bad = |what: &str| Error::MalformedCertificate(what.to_string());
    let element = v
        .get("element")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("node without an element"))?;
    let atoms = v
        .get("atoms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("node without atoms"))?
        .iter()
        .map(|a| {
            a.as_str()
                .ok_or_else(|| bad("atom is not a string"))
                .and_then(|n| p.index_of(n))
        })
        .collect::<Result<Vec<_>>>()?;
    let children = v
        .get("children")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("node without children"))?
        .iter()
        .map(|c| rao_tree_from_value(p, c, depth + 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(RaoTree {
        element: p.index_of(element)?,
        atoms,
        children,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIAMOND: &str =
        r#"{"elements":["0","a","b","1"],"covers":[["0","a"],["0","b"],["a","1"],["b","1"]]}"#;

    #[test]
    fn poset_round_trip() {
        let p = parse_poset(DIAMOND).unwrap();
        assert_eq!(parse_poset(&poset_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn poset_errors() {
        assert!(matches!(parse_poset("{"), Err(Error::Json(_))));
        assert!(matches!(
            parse_poset(r#"{"elements":["a","b"],"covers":[["a","b"],["b","a"]]}"#),
            Err(Error::CycleDetected(_))
        ));
        assert!(parse_poset(r#"{"elements":[],"covers":[]}"#).is_err());
        assert!(parse_poset(r#"{"elements":["a"],"covers":[],"extra":1}"#).is_err());
    }

    #[test]
    fn edge_labeling_and_round_trip() {
        let p = parse_poset(DIAMOND).unwrap();
        let l = Limits::default();
        let doc = r#"{"mode":"edge","labels":[
            {"from":"0","to":"a","label":1},{"from":"0","to":"b","label":2},
            {"from":"a","to":"1","label":2},{"from":"b","to":"1","label":1}]}"#;
        let lab = parse_labeling(&p, doc, &l).unwrap();
        assert_eq!(lab.len(), 4);
        let back = parse_labeling(&p, &labeling_to_json(&p, &lab, false), &l).unwrap();
        assert_eq!(back, lab);
    }

    #[test]
    fn labeling_errors() {
        let p = parse_poset(DIAMOND).unwrap();
        let l = Limits::default();
        let missing = r#"{"mode":"edge","labels":[{"from":"0","to":"a","label":1}]}"#;
        assert!(matches!(
            parse_labeling(&p, missing, &l),
            Err(Error::MissingLabel(_))
        ));
        let not_cover = r#"{"mode":"edge","labels":[{"from":"0","to":"1","label":1}]}"#;
        assert!(matches!(parse_labeling(&p, not_cover, &l), Err(Error::Parse(_))));
        let bad_root = r#"{"mode":"chain-edge","labels":[{"root":["a"],"from":"a","to":"1","label":1}]}"#;
        assert!(matches!(
            parse_labeling(&p, bad_root, &l),
            Err(Error::InvalidRoot(_))
        ));
    }

    #[test]
    fn rfas_round_trip() {
        let p = parse_poset(DIAMOND).unwrap();
        let l = Limits::default();
        let doc = r#"{"first_atoms":[{"root":["0"],"x":"0","y":"1","atom":"b"}]}"#;
        let omega = parse_rfas(&p, doc, &l).unwrap();
        assert_eq!(omega.get(&[0], 3), Some(2));
        assert_eq!(parse_rfas(&p, &rfas_to_json(&p, &omega), &l).unwrap(), omega);
        let wrong_x = r#"{"first_atoms":[{"root":["0"],"x":"a","y":"1","atom":"b"}]}"#;
        assert!(parse_rfas(&p, wrong_x, &l).is_err());
    }

    #[test]
    fn complex_round_trip() {
        let k = parse_complex(r#"{"vertices":["a","b","c"],"facets":[["a","b"],["b","c"]]}"#).unwrap();
        assert_eq!(parse_complex(&complex_to_json(&k)).unwrap(), k);
        assert!(parse_complex(r#"{"vertices":["a"],"facets":[["z"]]}"#).is_err());
    }

    #[test]
    fn chain_order_text() {
        let p = parse_poset(DIAMOND).unwrap();
        let order = parse_chain_order(&p, "# comment\n{0,b,1}\n0 a 1\n\n").unwrap();
        assert_eq!(order.chains()[0].0, vec![0, 2, 3]);
        let text = chain_order_to_text(&p, &order);
        assert_eq!(parse_chain_order(&p, &text).unwrap(), order);
        assert!(parse_chain_order(&p, "0 a 1\n").is_err());
    }

    #[test]
    fn rao_certificate_round_trip() {
        let p = parse_poset(DIAMOND).unwrap();
        let t = crate::rao::find_rao(&p, &Limits::default()).unwrap().unwrap();
        let v = rao_tree_to_json(&p, &t);
        assert_eq!(parse_rao_tree(&p, &v.to_string()).unwrap(), t);
        assert!(matches!(
            parse_rao_tree(&p, r#"{"element":"0"}"#),
            Err(Error::MalformedCertificate(_))
        ));
    }
}
