//! Chain-edge labelings and the lexicographic-shellability verifiers.
//!
//! A [`CeLabeling`] assigns an integer to every rooted cover relation
//! `[x, u]_r`. Label sequences are read bottom to top with the root growing
//! along the chain, and compared in dictionary order, so a proper prefix
//! precedes all of its extensions.
//!
//! [`classify`] evaluates every flag by direct quantification over rooted
//! intervals and attaches the first failing interval (in canonical
//! enumeration order) as a witness for each false flag.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{
    all_proper_roots, chains_between, check_budget, rooted_intervals, roots, validate_root, Chain, Limits,
    RootedInterval,
};
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::relabel::MaxChainOrder;

/// Integer labels on rooted cover relations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CeLabeling {
    table: HashMap<Vec<usize>, BTreeMap<usize, i64>>,
}

impl CeLabeling {
    pub fn new() -> Self {
        Self::default()
    }

    /// Expands an edge labeling to every root of every cover.
    pub fn from_edge_labels(
        p: &Poset,
        labels: &BTreeMap<(usize, usize), i64>,
        limits: &Limits,
    ) -> Result<Self> {
        check_budget(p, limits)?;
        let mut lab = CeLabeling::new();
        for root in all_proper_roots(p) {
            let x = root.top();
            for &y in p.up(x) {
                let label = labels
                    .get(&(x, y))
                    .copied()
                    .ok_or_else(|| Error::MissingLabel(format!("{} < {}", p.name(x), p.name(y))))?;
                lab.insert(root.0.clone(), y, label);
            }
        }
        Ok(lab)
    }

    /// Sets `λ(root, top(root), to)`.
    pub fn insert(&mut self, root: Vec<usize>, to: usize, label: i64) {
        self.table.entry(root).or_default().insert(to, label);
    }

    pub fn get(&self, root: &[usize], to: usize) -> Option<i64> {
        self.table.get(root).and_then(|m| m.get(&to)).copied()
    }

    pub fn label(&self, p: &Poset, root: &[usize], to: usize) -> Result<i64> {
        self.get(root, to).ok_or_else(|| {
            let names: Vec<&str> = root.iter().map(|&v| p.name(v)).collect();
            Error::MissingLabel(format!(
                "{} < {} rooted at {{{}}}",
                p.name(*root.last().unwrap()),
                p.name(to),
                names.join(",")
            ))
        })
    }

    pub fn len(&self) -> usize {
        self.table.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries `(root, to, label)` in canonical order.
    pub fn entries(&self) -> Vec<(Chain, usize, i64)> {
        let mut out: Vec<_> = self
            .table
            .iter()
            .flat_map(|(r, m)| m.iter().map(move |(&to, &l)| (Chain(r.clone()), to, l)))
            .collect();
        out.sort();
        out
    }

    /// Fails with `MissingLabel` on the first unlabeled rooted cover relation.
    pub fn check_total(&self, p: &Poset) -> Result<()> {
        for root in all_proper_roots(p) {
            for &y in p.up(root.top()) {
                self.label(p, &root, y)?;
            }
        }
        Ok(())
    }

    /// True when every cover carries the same label under all of its roots.
    pub fn is_root_independent(&self, p: &Poset) -> bool {
        self.root_dependence_witness(p).is_none()
    }

    fn root_dependence_witness(&self, p: &Poset) -> Option<(Chain, Chain, usize)> {
        for x in 0..p.len() {
            if x == p.top() {
                continue;
            }
            let rs = roots(p, x);
            for &y in p.up(x) {
                let first = self.get(&rs[0], y);
                for r in &rs[1..] {
                    if self.get(r, y) != first {
                        return Some((rs[0].clone(), r.clone(), y));
                    }
                }
            }
        }
        None
    }

    /// Applies `f` to every label.
    pub fn map_labels(&self, f: impl Fn(i64) -> i64) -> CeLabeling {
        let table = self
            .table
            .iter()
            .map(|(r, m)| (r.clone(), m.iter().map(|(&k, &v)| (k, f(v))).collect()))
            .collect();
        CeLabeling { table }
    }
}

/// A label sequence; the derived `Ord` is dictionary order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabelSequence(pub Vec<i64>);

impl LabelSequence {
    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_prefix_of(&self, other: &LabelSequence) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl fmt::Display for LabelSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Dictionary order; proper prefixes come first.
pub fn lex_compare(s: &[i64], t: &[i64]) -> Ordering {
    s.cmp(t)
}

/// Label sequence of the saturated chain `chain` (starting at the top of `root`).
pub fn label_sequence(p: &Poset, lab: &CeLabeling, root: &[usize], chain: &[usize]) -> Result<LabelSequence> {
    if chain.first() != root.last() {
        return Err(Error::InvalidRoot(format!(
            "chain does not start at the top of its root `{}`",
            root.last().map(|&v| p.name(v)).unwrap_or("?")
        )));
    }
    let mut acc = root.to_vec();
    let mut seq = Vec::with_capacity(chain.len().saturating_sub(1));
    for &next in &chain[1..] {
        seq.push(lab.label(p, &acc, next)?);
        acc.push(next);
    }
    Ok(LabelSequence(seq))
}

/// `u ⋖ v ⋖ w` with `u` the top of `root` is a topological ascent when its label
/// pair strictly precedes the label sequence of every other maximal chain of
/// `[u, w]_root`.
pub fn is_topological_ascent(
    p: &Poset,
    lab: &CeLabeling,
    root: &[usize],
    v: usize,
    w: usize,
) -> Result<bool> {
    validate_root(p, root)?;
    let u = *root.last().unwrap();
    if !p.covers(u, v) || !p.covers(v, w) {
        return Err(Error::Parse(format!(
            "{} < {} < {} is not a pair of covers",
            p.name(u),
            p.name(v),
            p.name(w)
        )));
    }
    let pair = label_sequence(p, lab, root, &[u, v, w])?;
    for c in chains_between(p, u, w) {
        if c.0 == [u, v, w] {
            continue;
        }
        if label_sequence(p, lab, root, &c)? <= pair {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Adjacent rooted cover pair `(r, u ⋖ v ⋖ w)` with `u` the top of `root`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedPair {
    pub root: Chain,
    pub v: usize,
    pub w: usize,
}

impl RootedPair {
    pub fn display(&self, p: &Poset) -> String {
        format!(
            "{} < {} < {} rooted at {}",
            p.name(self.root.top()),
            p.name(self.v),
            p.name(self.w),
            self.root.display(p)
        )
    }
}

/// Every adjacent rooted cover pair in canonical order.
pub fn rooted_pairs(p: &Poset) -> Vec<RootedPair> {
    let mut out = Vec::new();
    for root in all_proper_roots(p) {
        for &v in p.up(root.top()) {
            for &w in p.up(v) {
                out.push(RootedPair {
                    root: root.clone(),
                    v,
                    w,
                });
            }
        }
    }
    out
}

/// Precomputed topological ascents for a labeling.
pub(crate) struct AscentTable {
    table: HashMap<Vec<usize>, HashMap<(usize, usize), bool>>,
}

impl AscentTable {
    pub(crate) fn build(p: &Poset, lab: &CeLabeling) -> Result<Self> {
        let mut table: HashMap<Vec<usize>, HashMap<(usize, usize), bool>> = HashMap::new();
        for pair in rooted_pairs(p) {
            let asc = is_topological_ascent(p, lab, &pair.root, pair.v, pair.w)?;
            table
                .entry(pair.root.0)
                .or_default()
                .insert((pair.v, pair.w), asc);
        }
        Ok(AscentTable { table })
    }

    pub(crate) fn is_ascent(&self, root: &[usize], v: usize, w: usize) -> bool {
        self.table
            .get(root)
            .and_then(|m| m.get(&(v, w)))
            .copied()
            .expect("ascent table covers every rooted pair")
    }

    /// Positions `i` where `chain[i] ⋖ chain[i+1] ⋖ chain[i+2]` is a descent.
    pub(crate) fn descents_along(&self, root: &[usize], chain: &[usize]) -> Vec<usize> {
        let mut acc = root.to_vec();
        let mut out = Vec::new();
        for i in 0..chain.len().saturating_sub(2) {
            if !self.is_ascent(&acc, chain[i + 1], chain[i + 2]) {
                out.push(i);
            }
            acc.push(chain[i + 1]);
        }
        out
    }

    pub(crate) fn is_ascending(&self, root: &[usize], chain: &[usize]) -> bool {
        self.descents_along(root, chain).is_empty()
    }
}

/// The labeling properties that [`classify`] decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    El,
    Cl,
    Ec,
    Cc,
    Tcl,
    SelfConsistent,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::El,
        Property::Cl,
        Property::Ec,
        Property::Cc,
        Property::Tcl,
        Property::SelfConsistent,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::El => "el",
            Property::Cl => "cl",
            Property::Ec => "ec",
            Property::Cc => "cc",
            Property::Tcl => "tcl",
            Property::SelfConsistent => "self-consistent",
        }
    }
}

impl std::str::FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|k| k.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown labeling kind `{s}`")))
    }
}

/// A rooted interval on which a property fails, with the chains that show it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub property: Property,
    pub interval: RootedInterval,
    pub chains: Vec<(Chain, LabelSequence)>,
    pub reason: String,
}

impl Witness {
    pub fn describe(&self, p: &Poset) -> String {
        let mut s = format!(
            "{}: {} in {}",
            self.property.as_str(),
            self.reason,
            self.interval.display(p)
        );
        for (c, seq) in &self.chains {
            s.push_str(&format!("; {} {}", c.display(p), seq));
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct LabelingReport {
    pub el: bool,
    pub cl: bool,
    pub ec: bool,
    pub cc: bool,
    pub tcl: bool,
    pub self_consistent: bool,
    pub root_independent: bool,
    pub witnesses: Vec<Witness>,
}

impl LabelingReport {
    pub fn holds(&self, k: Property) -> bool {
        match k {
            Property::El => self.el,
            Property::Cl => self.cl,
            Property::Ec => self.ec,
            Property::Cc => self.cc,
            Property::Tcl => self.tcl,
            Property::SelfConsistent => self.self_consistent,
        }
    }

    pub fn witness(&self, k: Property) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.property == k)
    }
}

#[derive(Default)]
struct IntervalOutcome {
    cl: Option<Witness>,
    tcl: Option<Witness>,
    distinct: Option<Witness>,
    self_consistent: Option<Witness>,
}

fn evaluate_interval(
    p: &Poset,
    lab: &CeLabeling,
    asc: &AscentTable,
    iv: &RootedInterval,
) -> Result<IntervalOutcome> {
    let x = iv.x();
    let chains = chains_between(p, x, iv.y);
    let seqs = chains
        .iter()
        .map(|c| label_sequence(p, lab, &iv.root, c))
        .collect::<Result<Vec<_>>>()?;
    let pairs = || chains.iter().cloned().zip(seqs.iter().cloned());
    let mut out = IntervalOutcome::default();

    let increasing: Vec<usize> = (0..chains.len())
        .filter(|&i| seqs[i].is_strictly_increasing())
        .collect();
    let cl_ok = increasing.len() == 1
        && (0..chains.len()).all(|j| j == increasing[0] || seqs[increasing[0]] < seqs[j]);
    if !cl_ok {
        let reason = match increasing.len() {
            0 => "no strictly increasing maximal chain".to_string(),
            1 => "the increasing chain is not lexicographically first".to_string(),
            k => format!("{k} strictly increasing maximal chains"),
        };
        out.cl = Some(Witness {
            property: Property::Cl,
            interval: iv.clone(),
            chains: pairs().collect(),
            reason,
        });
    }

    let ascending: Vec<usize> = (0..chains.len())
        .filter(|&i| asc.is_ascending(&iv.root, &chains[i]))
        .collect();
    if ascending.len() != 1 {
        out.tcl = Some(Witness {
            property: Property::Tcl,
            interval: iv.clone(),
            chains: pairs().collect(),
            reason: format!("{} topologically ascending maximal chains", ascending.len()),
        });
    }

    let mut order: Vec<usize> = (0..chains.len()).collect();
    order.sort_by(|&a, &b| seqs[a].cmp(&seqs[b]));
    for w in order.windows(2) {
        let (s, t) = (&seqs[w[0]], &seqs[w[1]]);
        if s.is_prefix_of(t) {
            let reason = if s == t {
                "two maximal chains share a label sequence"
            } else {
                "a label sequence is a proper prefix of another"
            };
            out.distinct = Some(Witness {
                property: Property::Cc,
                interval: iv.clone(),
                chains: vec![
                    (chains[w[0]].clone(), s.clone()),
                    (chains[w[1]].clone(), t.clone()),
                ],
                reason: reason.to_string(),
            });
            break;
        }
    }

    if ascending.len() == 1 {
        let first = &chains[ascending[0]];
        let a = first[1];
        out.self_consistent = self_consistency_failure(p, lab, iv, a)?;
    }
    Ok(out)
}

/// Checks that, below every `y'` containing both `a` and another atom `b` of
/// `[x, y]_r`, every chain through `a` precedes every chain through `b`.
fn self_consistency_failure(
    p: &Poset,
    lab: &CeLabeling,
    iv: &RootedInterval,
    a: usize,
) -> Result<Option<Witness>> {
    let x = iv.x();
    for b in p.interval_atoms(x, iv.y) {
        if b == a {
            continue;
        }
        for y2 in 0..p.len() {
            if !(p.leq(a, y2) && p.leq(b, y2)) {
                continue;
            }
            let mut through_a = Vec::new();
            let mut through_b = Vec::new();
            for c in chains_between(p, x, y2) {
                let seq = label_sequence(p, lab, &iv.root, &c)?;
                if c[1] == a {
                    through_a.push((c, seq));
                } else if c[1] == b {
                    through_b.push((c, seq));
                }
            }
            let worst_a = through_a.iter().max_by(|l, r| l.1.cmp(&r.1));
            let best_b = through_b.iter().min_by(|l, r| l.1.cmp(&r.1));
            if let (Some(wa), Some(bb)) = (worst_a, best_b) {
                if wa.1 >= bb.1 {
                    return Ok(Some(Witness {
                        property: Property::SelfConsistent,
                        interval: RootedInterval {
                            root: iv.root.clone(),
                            y: y2,
                        },
                        chains: vec![wa.clone(), bb.clone()],
                        reason: format!(
                            "a chain through {} does not precede a chain through {}",
                            p.name(a),
                            p.name(b)
                        ),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Decides EL, CL, EC, CC, TCL and self-consistency for `lab`.
pub fn classify(p: &Poset, lab: &CeLabeling, limits: &Limits) -> Result<LabelingReport> {
    check_budget(p, limits)?;
    lab.check_total(p)?;
    let asc = AscentTable::build(p, lab)?;
    let intervals: Vec<RootedInterval> = rooted_intervals(p).collect();
    let outcomes = intervals
        .par_iter()
        .map(|iv| evaluate_interval(p, lab, &asc, iv))
        .collect::<Result<Vec<_>>>()?;

    let first = |f: fn(&IntervalOutcome) -> &Option<Witness>| outcomes.iter().find_map(|o| f(o).clone());
    let cl_w = first(|o| &o.cl);
    let tcl_w = first(|o| &o.tcl);
    let distinct_w = first(|o| &o.distinct);
    let sc_w = first(|o| &o.self_consistent);

    let root_dep = lab.root_dependence_witness(p);
    let root_independent = root_dep.is_none();
    let tcl = tcl_w.is_none();
    let cl = cl_w.is_none();
    let cc = tcl && distinct_w.is_none();
    let el = cl && root_independent;
    let ec = cc && root_independent;
    let self_consistent = tcl && sc_w.is_none();

    let root_witness = |property: Property| -> Option<Witness> {
        let (r1, r2, y) = root_dep.clone()?;
        let l1 = lab.get(&r1, y).map(|l| LabelSequence(vec![l]))?;
        let l2 = lab.get(&r2, y).map(|l| LabelSequence(vec![l]))?;
        Some(Witness {
            property,
            interval: RootedInterval { root: r2.clone(), y },
            chains: vec![(r1.extended(y), l1), (r2.extended(y), l2)],
            reason: "label depends on the root".to_string(),
        })
    };

    let mut witnesses = Vec::new();
    if !el {
        let w = root_witness(Property::El).or_else(|| {
            cl_w.clone().map(|w| Witness {
                property: Property::El,
                ..w
            })
        });
        witnesses.extend(w);
    }
    if let Some(w) = cl_w.clone() {
        witnesses.push(w);
    }
    if !ec {
        let w = if !cc {
            tcl_w.clone().or(distinct_w.clone())
        } else {
            root_witness(Property::Ec)
        };
        witnesses.extend(w.map(|w| Witness {
            property: Property::Ec,
            ..w
        }));
    }
    if !cc {
        let w = tcl_w.clone().or(distinct_w.clone());
        witnesses.extend(w.map(|w| Witness {
            property: Property::Cc,
            ..w
        }));
    }
    if let Some(w) = tcl_w.clone() {
        witnesses.push(w);
    }
    if !self_consistent {
        let w = tcl_w.clone().or(sc_w);
        witnesses.extend(w.map(|w| Witness {
            property: Property::SelfConsistent,
            ..w
        }));
    }

    Ok(LabelingReport {
        el,
        cl,
        ec,
        cc,
        tcl,
        self_consistent,
        root_independent,
        witnesses,
    })
}

/// Every adjacent rooted cover pair that is a topological descent.
pub fn descent_set(p: &Poset, lab: &CeLabeling, limits: &Limits) -> Result<BTreeSet<RootedPair>> {
    check_budget(p, limits)?;
    lab.check_total(p)?;
    let mut out = BTreeSet::new();
    for pair in rooted_pairs(p) {
        if !is_topological_ascent(p, lab, &pair.root, pair.v, pair.w)? {
            out.insert(pair);
        }
    }
    Ok(out)
}

/// Maximal chains sorted by their label sequences from the root `{0̂}`.
///
/// Chains with equal sequences are ordered canonically when `tie_break` is set;
/// otherwise such a tie is an `AmbiguousOrder` error.
pub fn lex_order_max_chains(p: &Poset, lab: &CeLabeling, tie_break: bool) -> Result<MaxChainOrder> {
    let bottom = [p.bottom()];
    let mut keyed = crate::chain::maximal_chains(p)
        .into_iter()
        .map(|c| Ok((label_sequence(p, lab, &bottom, &c)?, c)))
        .collect::<Result<Vec<_>>>()?;
    // Canonical chain order is the secondary key.
    keyed.sort();
    if !tie_break {
        if let Some(w) = keyed.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::AmbiguousOrder(w[0].0.to_string()));
        }
    }
    MaxChainOrder::new(p, keyed.into_iter().map(|(_, c)| c).collect())
}
