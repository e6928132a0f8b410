//! Built-in example posets with labelings, first atom sets and recorded
//! outcomes. Fixtures live in the repository's `corpus/` directory and are
//! embedded at compile time.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::chain::{maximal_chains, Limits};
use crate::error::{Error, Result};
use crate::io::{parse_poset, parse_rfas, LabelingDoc};
use crate::labeling::{classify, lex_order_max_chains, CeLabeling, Property};
use crate::poset::Poset;
use crate::rao::{find_grao, find_rao};
use crate::rfas::{check_lc, check_rfas, Direction, FirstAtomSet, RfasOptions};
use crate::shelling::{brute_force_shellable, full_complex_order, is_shelling, order_complex, ComplexMode};

macro_rules! fixtures {
    ($($path:literal),* $(,)?) => {
        &[$(($path, include_str!(concat!("../../../corpus/", $path)))),*]
    };
}

static FIXTURES: &[(&str, &str)] = fixtures![
    "manifest.json",
    "fig1/poset.json",
    "fig1/left.json",
    "fig1/middle.json",
    "fig1/right.json",
    "fig2-P/poset.json",
    "fig2-P/bold.json",
    "fig2-P/dual-el.json",
    "fig3-Q/poset.json",
    "fig3-Q/left.json",
    "fig3-Q/right.json",
    "fig5-P/poset.json",
    "fig5-P/C.json",
    "fig5-P/C-prime.json",
    "fig5-Q/poset.json",
    "fig5-Q/omega.json",
    "fig8/poset.json",
    "fig8/omega.json",
];

/// Raw text of an embedded fixture, by path relative to `corpus/`.
pub fn fixture_text(path: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(p, _)| *p == path).map(|(_, t)| *t)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    examples: Vec<ManifestEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestEntry {
    name: String,
    comment: String,
    poset: String,
    expect: ExampleExpectations,
    #[serde(default)]
    labelings: Vec<ManifestFile<LabelingExpectations>>,
    #[serde(default)]
    first_atom_sets: Vec<ManifestFile<RfasExpectations>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile<E> {
    name: String,
    file: String,
    expect: E,
}

/// Recorded facts about an example poset. Absent fields are not checked.
#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ExampleExpectations {
    pub elements: Option<usize>,
    pub graded: Option<bool>,
    pub maximal_chains: Option<usize>,
    /// Number of elements of each rank, bottom first. Graded posets only.
    pub rank_sizes: Option<Vec<usize>>,
    pub rao: Option<bool>,
    pub grao: Option<bool>,
    pub shellable: Option<bool>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LabelingExpectations {
    pub el: Option<bool>,
    pub cl: Option<bool>,
    pub ec: Option<bool>,
    pub cc: Option<bool>,
    pub tcl: Option<bool>,
}

impl LabelingExpectations {
    pub fn get(&self, k: Property) -> Option<bool> {
        match k {
            Property::El => self.el,
            Property::Cl => self.cl,
            Property::Ec => self.ec,
            Property::Cc => self.cc,
            Property::Tcl => self.tcl,
            Property::SelfConsistent => None,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RfasExpectations {
    pub condition_i: Option<bool>,
    pub condition_ii: Option<bool>,
    /// A condition (i) violation in this direction is reported.
    #[serde(default, with = "direction_opt")]
    pub direction: Option<Direction>,
    /// Some linear extension of the chain order satisfies (LC).
    pub lc: Option<bool>,
}

mod direction_opt {
    use serde::{Deserialize, Deserializer};

    use crate::rfas::Direction;

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Direction>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        match s.as_deref() {
            None => Ok(None),
            Some("forward") => Ok(Some(Direction::Forward)),
            Some("backward") => Ok(Some(Direction::Backward)),
            Some(other) => Err(serde::de::Error::custom(format!("unknown direction `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NamedLabeling {
    pub name: String,
    /// The labeling is on the dual of the example poset.
    pub on_dual: bool,
    /// The poset the labeling lives on.
    pub poset: Poset,
    pub labeling: CeLabeling,
    pub expect: LabelingExpectations,
}

#[derive(Clone, Debug)]
pub struct NamedFirstAtomSet {
    pub name: String,
    pub omega: FirstAtomSet,
    pub expect: RfasExpectations,
}

#[derive(Clone, Debug)]
pub struct NamedExample {
    pub name: String,
    pub comment: String,
    pub poset: Poset,
    pub labelings: Vec<NamedLabeling>,
    pub first_atom_sets: Vec<NamedFirstAtomSet>,
    pub expect: ExampleExpectations,
}

impl NamedExample {
    pub fn labeling(&self, name: &str) -> Option<&NamedLabeling> {
        self.labelings.iter().find(|l| l.name == name)
    }

    pub fn first_atom_set(&self, name: &str) -> Option<&NamedFirstAtomSet> {
        self.first_atom_sets.iter().find(|o| o.name == name)
    }
}

fn manifest() -> Manifest {
    let text = fixture_text("manifest.json").expect("manifest is embedded");
    serde_json::from_str(text).expect("embedded manifest parses")
}

fn embedded(path: &str) -> Result<&'static str> {
    fixture_text(path).ok_or_else(|| Error::UnknownName(path.to_string()))
}

/// Names of every built-in example.
pub fn names() -> Vec<String> {
    manifest().examples.into_iter().map(|e| e.name).collect()
}

pub fn load_named(name: &str) -> Result<NamedExample> {
    let entry = manifest()
        .examples
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownName(name.to_string()))?;
    let limits = Limits::default();
    let poset = parse_poset(embedded(&entry.poset)?)?;
    let dual = poset.dual();
    let mut labelings = Vec::new();
    for l in entry.labelings {
        let doc = LabelingDoc::parse(embedded(&l.file)?)?;
        let target = if doc.on_dual() { &dual } else { &poset };
        let labeling = doc.resolve(target, &limits)?;
        labelings.push(NamedLabeling {
            name: l.name,
            on_dual: doc.on_dual(),
            poset: target.clone(),
            labeling,
            expect: l.expect,
        });
    }
    let mut first_atom_sets = Vec::new();
    for o in entry.first_atom_sets {
        let omega = parse_rfas(&poset, embedded(&o.file)?, &limits)?;
        first_atom_sets.push(NamedFirstAtomSet {
            name: o.name,
            omega,
            expect: o.expect,
        });
    }
    Ok(NamedExample {
        name: entry.name,
        comment: entry.comment,
        poset,
        labelings,
        first_atom_sets,
        expect: entry.expect,
    })
}

/// What a `corpus:` URI points at.
#[derive(Clone, Debug)]
pub enum CorpusItem {
    Poset(NamedExample),
    Labeling(NamedExample, usize),
    FirstAtomSet(NamedExample, usize),
}

impl CorpusItem {
    pub fn example(&self) -> &NamedExample {
        match self {
            CorpusItem::Poset(e) | CorpusItem::Labeling(e, _) | CorpusItem::FirstAtomSet(e, _) => e,
        }
    }
}

/// Resolves `corpus:NAME` or `corpus:NAME/ITEM` (the `corpus:` prefix is optional).
pub fn resolve_uri(uri: &str) -> Result<CorpusItem> {
    let rest = uri.strip_prefix("corpus:").unwrap_or(uri);
    let (name, item) = match rest.split_once('/') {
        Some((n, i)) => (n, Some(i)),
        None => (rest, None),
    };
    let ex = load_named(name)?;
    let Some(item) = item else {
        return Ok(CorpusItem::Poset(ex));
    };
    let item = item.strip_suffix(".json").unwrap_or(item);
    if item == "poset" {
        return Ok(CorpusItem::Poset(ex));
    }
    if let Some(i) = ex.labelings.iter().position(|l| l.name == item) {
        return Ok(CorpusItem::Labeling(ex, i));
    }
    if let Some(i) = ex.first_atom_sets.iter().position(|o| o.name == item) {
        return Ok(CorpusItem::FirstAtomSet(ex, i));
    }
    Err(Error::UnknownName(uri.to_string()))
}

/// Number of elements of each rank, or `None` if `p` is not graded.
pub fn rank_sizes(p: &Poset) -> Option<Vec<usize>> {
    if !p.is_graded() {
        return None;
    }
    let mut rank = vec![0usize; p.len()];
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&v| (0..p.len()).filter(|&u| p.lt(u, v)).count());
    for &v in &order {
        rank[v] = p.down(v).iter().map(|&u| rank[u] + 1).max().unwrap_or(0);
    }
    let mut sizes = vec![0usize; p.length() + 1];
    for r in rank {
        sizes[r] += 1;
    }
    Some(sizes)
}

/// One recorded expectation and its live outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectationCheck {
    pub what: String,
    pub expected: String,
    pub actual: String,
}

impl ExpectationCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }
}

fn record<T: std::fmt::Debug>(
    out: &mut Vec<ExpectationCheck>,
    what: String,
    expected: &Option<T>,
    actual: impl FnOnce() -> Result<T>,
) -> Result<()> {
    if let Some(e) = expected {
        out.push(ExpectationCheck {
            what,
            expected: format!("{e:?}"),
            actual: format!("{:?}", actual()?),
        });
    }
    Ok(())
}

fn is_shellable(ex: &NamedExample, limits: &Limits) -> Result<bool> {
    let p = &ex.poset;
    for l in ex.labelings.iter().filter(|l| !l.on_dual) {
        let gamma = lex_order_max_chains(p, &l.labeling, true)?;
        let (k, order) = full_complex_order(p, gamma.chains())?;
        if is_shelling(&k, &order)?.ok {
            return Ok(true);
        }
    }
    let k = order_complex(p, ComplexMode::Full)?;
    Ok(brute_force_shellable(&k, limits)?.order.is_some())
}

/// Evaluates every recorded expectation of `ex` with the live checkers.
pub fn check_expectations(ex: &NamedExample, limits: &Limits) -> Result<Vec<ExpectationCheck>> {
    let p = &ex.poset;
    let e = &ex.expect;
    let mut out = Vec::new();
    let n = &ex.name;
    record(&mut out, format!("{n}: elements"), &e.elements, || Ok(p.len()))?;
    record(&mut out, format!("{n}: graded"), &e.graded, || Ok(p.is_graded()))?;
    record(
        &mut out,
        format!("{n}: maximal chains"),
        &e.maximal_chains,
        || Ok(maximal_chains(p).len()),
    )?;
    record(&mut out, format!("{n}: rank sizes"), &e.rank_sizes, || {
        Ok(rank_sizes(p).unwrap_or_default())
    })?;
    record(&mut out, format!("{n}: recursive atom ordering"), &e.rao, || {
        Ok(find_rao(p, limits)?.is_some())
    })?;
    record(
        &mut out,
        format!("{n}: generalized recursive atom ordering"),
        &e.grao,
        || Ok(find_grao(p, limits)?.is_some()),
    )?;
    record(&mut out, format!("{n}: shellable"), &e.shellable, || {
        is_shellable(ex, limits)
    })?;

    for l in &ex.labelings {
        let report = classify(&l.poset, &l.labeling, limits)?;
        let verdicts: BTreeMap<&str, bool> = Property::ALL
            .iter()
            .map(|&k| (k.as_str(), report.holds(k)))
            .collect();
        for &k in Property::ALL.iter() {
            let what = format!("{n}/{}: {}", l.name, k.as_str());
            record(&mut out, what, &l.expect.get(k), || Ok(verdicts[k.as_str()]))?;
        }
    }

    for o in &ex.first_atom_sets {
        let report = check_rfas(p, &o.omega, RfasOptions::default(), limits)?;
        let x = &o.expect;
        record(
            &mut out,
            format!("{n}/{}: condition (i)", o.name),
            &x.condition_i,
            || Ok(report.condition_i),
        )?;
        record(
            &mut out,
            format!("{n}/{}: condition (ii)", o.name),
            &x.condition_ii,
            || Ok(report.condition_ii),
        )?;
        if let Some(d) = x.direction {
            out.push(ExpectationCheck {
                what: format!("{n}/{}: {d:?} violation of condition (i)", o.name),
                expected: "true".into(),
                actual: report.has_direction(d).to_string(),
            });
        }
        record(
            &mut out,
            format!("{n}/{}: (LC) extension exists", o.name),
            &x.lc,
            || Ok(check_lc(p, &o.omega, limits)?.is_some()),
        )?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_is_listed_in_the_manifest() {
        let m = manifest();
        let mut used: Vec<&str> = vec!["manifest.json"];
        for e in &m.examples {
            used.push(&e.poset);
            used.extend(e.labelings.iter().map(|l| l.file.as_str()));
            used.extend(e.first_atom_sets.iter().map(|o| o.file.as_str()));
        }
        for (path, _) in FIXTURES {
            assert!(used.contains(path), "{path} is embedded but unused");
        }
        for path in used {
            assert!(
                fixture_text(path).is_some(),
                "{path} is referenced but not embedded"
            );
        }
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(matches!(load_named("fig4"), Err(Error::UnknownName(_))));
        assert!(matches!(
            resolve_uri("corpus:fig1/nothing"),
            Err(Error::UnknownName(_))
        ));
    }

    #[test]
    fn uris_resolve() {
        assert!(matches!(
            resolve_uri("corpus:fig1").unwrap(),
            CorpusItem::Poset(_)
        ));
        assert!(matches!(
            resolve_uri("corpus:fig1/poset.json").unwrap(),
            CorpusItem::Poset(_)
        ));
        assert!(matches!(
            resolve_uri("corpus:fig2-P/bold").unwrap(),
            CorpusItem::Labeling(_, 0)
        ));
        assert!(matches!(
            resolve_uri("fig8/omega").unwrap(),
            CorpusItem::FirstAtomSet(_, 0)
        ));
    }
}
