//! Order complexes, shelling verification and brute-force shellability.
//!
//! Facets are sorted vertex lists. Pure and nonpure complexes are handled
//! alike: a facet order is a shelling when each facet meets the union of its
//! predecessors in a subcomplex that is pure of codimension one in the facet.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::chain::{chains_between, roots, validate_root, Chain, Limits};
use crate::error::{Error, Result};
use crate::labeling::{is_topological_ascent, CeLabeling};
use crate::poset::Poset;

/// A simplicial complex given by its facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderComplex {
    vertices: Vec<String>,
    facets: Vec<Vec<usize>>,
    /// Poset element behind each vertex, when built from a poset.
    elements: Option<Vec<usize>>,
}

/// Which chains become facets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexMode {
    /// Maximal chains of the whole poset, bounds included.
    Full,
    /// Maximal chains of the open interval `(x, y)`.
    Open(usize, usize),
}

impl OrderComplex {
    /// Validates facets over vertex indices `0..vertices.len()`.
    pub fn new(vertices: Vec<String>, facets: Vec<Vec<usize>>) -> Result<Self> {
        let n = vertices.len();
        let mut names = HashSet::new();
        for v in &vertices {
            if !names.insert(v) {
                return Err(Error::InvalidComplex(format!("duplicate vertex `{v}`")));
            }
        }
        let mut normalized = Vec::with_capacity(facets.len());
        let mut covered = vec![false; n];
        for f in facets {
            let mut f = f;
            f.sort_unstable();
            if f.is_empty() {
                return Err(Error::InvalidComplex("empty facet".into()));
            }
            if f.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex("facet repeats a vertex".into()));
            }
            if let Some(&v) = f.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidComplex(format!("vertex index {v} out of range")));
            }
            for &v in &f {
                covered[v] = true;
            }
            normalized.push(f);
        }
        if normalized.is_empty() {
            return Err(Error::InvalidComplex("no facets".into()));
        }
        for (i, f) in normalized.iter().enumerate() {
            for (j, g) in normalized.iter().enumerate() {
                if i != j && is_subset(f, g) {
                    return Err(Error::InvalidComplex(format!(
                        "facet {} is contained in facet {}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            return Err(Error::InvalidComplex(format!(
                "vertex `{}` lies in no facet",
                vertices[v]
            )));
        }
        Ok(OrderComplex {
            vertices,
            facets: normalized,
            elements: None,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn elements(&self) -> Option<&[usize]> {
        self.elements.as_deref()
    }

    /// Facet index of a poset chain (after dropping any endpoints outside the complex).
    pub fn facet_of_chain(&self, c: &[usize]) -> Option<usize> {
        let elems = self.elements.as_ref()?;
        let mut f: Vec<usize> = c
            .iter()
            .filter_map(|v| elems.iter().position(|e| e == v))
            .collect();
        f.sort_unstable();
        self.facets.iter().position(|g| *g == f)
    }

    /// Facet order for a list of poset chains.
    pub fn order_from_chains(&self, chains: &[Chain]) -> Result<Vec<usize>> {
        chains
            .iter()
            .map(|c| {
                self.facet_of_chain(c)
                    .ok_or_else(|| Error::InvalidOrder(format!("chain {:?} is not a facet", c.0)))
            })
            .collect()
    }

    pub fn facet_names(&self, f: usize) -> Vec<&str> {
        self.facets[f]
            .iter()
            .map(|&v| self.vertices[v].as_str())
            .collect()
    }

    /// Number of faces of each size, starting with vertices.
    pub fn f_vector(&self) -> Result<Vec<usize>> {
        let faces = self.all_faces()?;
        let dim = self.facets.iter().map(Vec::len).max().unwrap_or(0);
        let mut f = vec![0; dim];
        for face in faces {
            f[face.len() - 1] += 1;
        }
        Ok(f)
    }

    fn all_faces(&self) -> Result<HashSet<Vec<usize>>> {
        let mut faces = HashSet::new();
        for f in &self.facets {
            if f.len() > 24 {
                return Err(Error::BudgetExceeded {
                    what: format!("face enumeration of a facet with {} vertices", f.len()),
                    limit: 24,
                });
            }
            for mask in 1u32..(1 << f.len()) {
                let face: Vec<usize> = (0..f.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| f[i])
                    .collect();
                faces.insert(face);
            }
        }
        Ok(faces)
    }

    /// Euler characteristic from the full face enumeration.
    pub fn euler_characteristic(&self) -> Result<i64> {
        Ok(self
            .all_faces()?
            .iter()
            .map(|f| if f.len() % 2 == 1 { 1 } else { -1 })
            .sum())
    }

    /// Degrees of vertices in the 1-skeleton.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut nbrs = vec![BTreeSet::new(); self.vertices.len()];
        for f in &self.facets {
            for &a in f {
                for &b in f {
                    if a != b {
                        nbrs[a].insert(b);
                    }
                }
            }
        }
        nbrs.iter().map(BTreeSet::len).collect()
    }

    /// Number of edges of the 1-skeleton.
    pub fn edge_count(&self) -> usize {
        self.vertex_degrees().iter().sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], v: usize) -> usize {
            let mut r = v;
            while parent[r] != r {
                r = parent[r];
            }
            parent[v] = r;
            r
        }
        for f in &self.facets {
            for w in f.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        (0..n).all(|v| find(&mut parent, v) == root)
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|v| b.binary_search(v).is_ok()).collect()
}

/// The order complex of `p` or of one of its open intervals.
pub fn order_complex(p: &Poset, mode: ComplexMode) -> Result<OrderComplex> {
    let (x, y, keep_ends) = match mode {
        ComplexMode::Full => (p.bottom(), p.top(), true),
        ComplexMode::Open(x, y) => (x, y, false),
    };
    if !keep_ends && (!p.lt(x, y) || p.covers(x, y)) {
        return Err(Error::EmptyInterval(p.name(x).into(), p.name(y).into()));
    }
    let elements: Vec<usize> = (0..p.len())
        .filter(|&v| p.leq(x, v) && p.leq(v, y) && (keep_ends || (v != x && v != y)))
        .collect();
    let local: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let facets = chains_between(p, x, y)
        .iter()
        .map(|c| c.iter().filter_map(|v| local.get(v).copied()).collect())
        .collect();
    let vertices = elements.iter().map(|&v| p.name(v).to_string()).collect();
    let mut k = OrderComplex::new(vertices, facets)?;
    k.elements = Some(elements);
    Ok(k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellingCheck {
    pub ok: bool,
    /// Position in the order of the first failing facet, with an explanation.
    pub first_violation: Option<(usize, String)>,
}

fn check_permutation(k: &OrderComplex, order: &[usize]) -> Result<()> {
    let n = k.facets.len();
    let mut seen = vec![false; n];
    for &f in order {
        if f >= n || std::mem::replace(&mut seen[f], true) {
            return Err(Error::InvalidOrder(format!(
                "facet index {f} invalid or repeated"
            )));
        }
    }
    if order.len() != n {
        return Err(Error::InvalidOrder(format!(
            "{} of {} facets ordered",
            order.len(),
            n
        )));
    }
    Ok(())
}

/// Pairwise criterion for facet `order[j]` against its predecessors.
fn pairwise_ok(k: &OrderComplex, prefix: &[usize], fj: usize) -> Option<String> {
    let f = &k.facets[fj];
    let meets: Vec<Vec<usize>> = prefix.iter().map(|&i| intersect(&k.facets[i], f)).collect();
    for (ii, m) in meets.iter().enumerate() {
        let found = meets.iter().any(|mk| mk.len() + 1 == f.len() && is_subset(m, mk));
        if !found {
            return Some(format!(
                "intersection with facet {} is not inside a codimension-one shared face",
                prefix[ii] + 1
            ));
        }
    }
    None
}

/// Checks the shelling condition with the pairwise criterion.
pub fn is_shelling(k: &OrderComplex, order: &[usize]) -> Result<ShellingCheck> {
    check_permutation(k, order)?;
    for j in 1..order.len() {
        if let Some(why) = pairwise_ok(k, &order[..j], order[j]) {
            return Ok(ShellingCheck {
                ok: false,
                first_violation: Some((j, why)),
            });
        }
    }
    Ok(ShellingCheck {
        ok: true,
        first_violation: None,
    })
}

/// Checks the shelling condition by enumerating the faces of each facet that
/// lie in an earlier facet and requiring every maximal one to have codimension one.
pub fn is_shelling_by_faces(k: &OrderComplex, order: &[usize]) -> Result<ShellingCheck> {
    check_permutation(k, order)?;
    for j in 1..order.len() {
        let f = &k.facets[order[j]];
        if f.len() > 20 {
            return Err(Error::BudgetExceeded {
                what: format!("face enumeration of a facet with {} vertices", f.len()),
                limit: 20,
            });
        }
        let earlier = &order[..j];
        let shared: Vec<u32> = (0u32..(1 << f.len()))
            .filter(|&mask| {
                let face: Vec<usize> = (0..f.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| f[i])
                    .collect();
                earlier.iter().any(|&i| is_subset(&face, &k.facets[i]))
            })
            .collect();
        let shared_set: HashSet<u32> = shared.iter().copied().collect();
        for &mask in &shared {
            let maximal = (0..f.len()).all(|i| mask >> i & 1 == 1 || !shared_set.contains(&(mask | 1 << i)));
            if maximal && mask.count_ones() as usize + 1 != f.len() {
                return Ok(ShellingCheck {
                    ok: false,
                    first_violation: Some((
                        j,
                        format!(
                            "a maximal shared face has {} of {} vertices",
                            mask.count_ones(),
                            f.len()
                        ),
                    )),
                });
            }
        }
    }
    Ok(ShellingCheck {
        ok: true,
        first_violation: None,
    })
}

/// `R(F_j)`, listed by position in `order`.
pub fn restriction_map(k: &OrderComplex, order: &[usize]) -> Result<Vec<BTreeSet<usize>>> {
    let check = is_shelling(k, order)?;
    if let Some((j, why)) = check.first_violation {
        return Err(Error::NotAShelling(format!("position {}: {why}", j + 1)));
    }
    Ok((0..order.len())
        .map(|j| {
            let f = &k.facets[order[j]];
            f.iter()
                .copied()
                .filter(|&v| {
                    let rest: Vec<usize> = f.iter().copied().filter(|&u| u != v).collect();
                    order[..j].iter().any(|&i| is_subset(&rest, &k.facets[i]))
                })
                .collect()
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyReport {
    /// Sphere dimension to number of facets with `R(F) = F`.
    pub spheres: BTreeMap<usize, usize>,
    pub euler_from_faces: i64,
    pub euler_from_spheres: i64,
}

impl HomotopyReport {
    pub fn consistent(&self) -> bool {
        self.euler_from_faces == self.euler_from_spheres
    }

    pub fn total(&self) -> usize {
        self.spheres.values().sum()
    }
}

/// Wedge summand counts of a shelling, with an Euler characteristic cross-check.
pub fn homotopy_report(k: &OrderComplex, order: &[usize]) -> Result<HomotopyReport> {
    let r = restriction_map(k, order)?;
    let mut spheres = BTreeMap::new();
    for (j, rj) in r.iter().enumerate() {
        let f = &k.facets[order[j]];
        if rj.len() == f.len() {
            *spheres.entry(f.len() - 1).or_insert(0) += 1;
        }
    }
    let euler_from_spheres = 1 + spheres
        .iter()
        .map(|(&d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum::<i64>();
    Ok(HomotopyReport {
        spheres,
        euler_from_faces: k.euler_characteristic()?,
        euler_from_spheres,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceResult {
    pub order: Option<Vec<usize>>,
    /// Search nodes visited.
    pub nodes: u64,
}

/// Searches every facet order by backtracking over shelling prefixes.
pub fn brute_force_shellable(k: &OrderComplex, limits: &Limits) -> Result<BruteForceResult> {
    let n = k.facets.len();
    if n > limits.max_facets || n > 128 {
        return Err(Error::BudgetExceeded {
            what: format!("brute-force shelling search over {n} facets"),
            limit: limits.max_facets.min(128) as u64,
        });
    }
    struct Search<'a> {
        k: &'a OrderComplex,
        order: Vec<usize>,
        dead: HashSet<u128>,
        nodes: u64,
        budget: u64,
    }
    impl Search<'_> {
        fn run(&mut self, mask: u128) -> Result<bool> {
            let n = self.k.facets.len();
            if self.order.len() == n {
                return Ok(true);
            }
            if self.dead.contains(&mask) {
                return Ok(false);
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    what: "brute-force shelling search nodes".into(),
                    limit: self.budget,
                });
            }
            for c in 0..n {
                if mask >> c & 1 == 1 {
                    continue;
                }
                if pairwise_ok(self.k, &self.order, c).is_some() {
                    continue;
                }
                self.order.push(c);
                if self.run(mask | 1 << c)? {
                    return Ok(true);
                }
                self.order.pop();
            }
            self.dead.insert(mask);
            Ok(false)
        }
    }
    let mut s = Search {
        k,
        order: Vec::with_capacity(n),
        dead: HashSet::new(),
        nodes: 0,
        budget: limits.max_search_nodes,
    };
    let found = s.run(0)?;
    Ok(BruteForceResult {
        order: found.then_some(s.order),
        nodes: s.nodes,
    })
}

/// Maximal chains of `[x, y]` all of whose adjacent pairs are topological descents.
///
/// A chain with a single cover has no adjacent pairs and is reported.
pub fn descending_chains(
    p: &Poset,
    lab: &CeLabeling,
    root: Option<&[usize]>,
    x: usize,
    y: usize,
) -> Result<Vec<Chain>> {
    let root: Vec<usize> = match root {
        Some(r) => {
            validate_root(p, r)?;
            if *r.last().unwrap() != x {
                return Err(Error::InvalidRoot(Chain(r.to_vec()).display(p)));
            }
            r.to_vec()
        }
        None => {
            let rs = roots(p, x);
            if rs.len() != 1 {
                return Err(Error::AmbiguousRoot(p.name(x).into()));
            }
            rs[0].0.clone()
        }
    };
    let mut out = Vec::new();
    for c in chains_between(p, x, y) {
        if c.len() < 2 {
            continue;
        }
        let mut acc = root.clone();
        let mut descending = true;
        for i in 0..c.len() - 2 {
            if is_topological_ascent(p, lab, &acc, c[i + 1], c[i + 2])? {
                descending = false;
                break;
            }
            acc.push(c[i + 1]);
        }
        if descending {
            out.push(c);
        }
    }
    Ok(out)
}

/// Facet order of the full order complex for a chain order.
pub fn full_complex_order(p: &Poset, chains: &[Chain]) -> Result<(OrderComplex, Vec<usize>)> {
    let k = order_complex(p, ComplexMode::Full)?;
    let order = k.order_from_chains(chains)?;
    Ok((k, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(vs: &[&str], fs: &[&[usize]]) -> OrderComplex {
        OrderComplex::new(
            vs.iter().map(|s| s.to_string()).collect(),
            fs.iter().map(|f| f.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        let v = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        assert!(OrderComplex::new(v(2), vec![vec![0, 1], vec![0]]).is_err());
        assert!(OrderComplex::new(v(3), vec![vec![0, 1]]).is_err());
        assert!(OrderComplex::new(v(2), vec![vec![0, 2]]).is_err());
        assert!(OrderComplex::new(v(2), vec![vec![]]).is_err());
    }

    #[test]
    fn single_facet_is_a_shelling() {
        let k = complex(&["a", "b"], &[&[0, 1]]);
        assert!(is_shelling(&k, &[0]).unwrap().ok);
        assert_eq!(restriction_map(&k, &[0]).unwrap()[0].len(), 0);
    }

    #[test]
    fn triangle_boundary() {
        let k = complex(&["a", "b", "c"], &[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(is_shelling(&k, &[0, 1, 2]).unwrap().ok);
        assert!(is_shelling_by_faces(&k, &[0, 1, 2]).unwrap().ok);
        let r = restriction_map(&k, &[0, 1, 2]).unwrap();
        let sizes: Vec<usize> = r.iter().map(BTreeSet::len).collect();
        assert_eq!(sizes, vec![0, 1, 2]);
        let h = homotopy_report(&k, &[0, 1, 2]).unwrap();
        assert_eq!(h.spheres.get(&1), Some(&1));
        assert_eq!(h.euler_from_faces, 0);
        assert!(h.consistent());
    }

    #[test]
    fn two_disjoint_edges() {
        let k = complex(&["a", "b", "c", "d"], &[&[0, 1], &[2, 3]]);
        assert!(!is_shelling(&k, &[0, 1]).unwrap().ok);
        assert!(!is_shelling_by_faces(&k, &[1, 0]).unwrap().ok);
        let r = brute_force_shellable(&k, &Limits::default()).unwrap();
        assert!(r.order.is_none());
        assert!(!k.is_connected());
    }

    #[test]
    fn isolated_points_shell() {
        let k = complex(&["a", "b"], &[&[0], &[1]]);
        assert!(is_shelling(&k, &[0, 1]).unwrap().ok);
        assert!(is_shelling_by_faces(&k, &[0, 1]).unwrap().ok);
        let h = homotopy_report(&k, &[0, 1]).unwrap();
        assert_eq!(h.spheres.get(&0), Some(&1));
        assert!(h.consistent());
    }

    #[test]
    fn nonpure_shelling() {
        // Triangle abc with a pendant edge cd.
        let k = complex(&["a", "b", "c", "d"], &[&[0, 1, 2], &[2, 3]]);
        assert!(is_shelling(&k, &[0, 1]).unwrap().ok);
        assert!(!is_shelling(&k, &[1, 0]).unwrap().ok);
        assert!(!is_shelling_by_faces(&k, &[1, 0]).unwrap().ok);
    }

    #[test]
    fn bad_orders_are_rejected() {
        let k = complex(&["a", "b"], &[&[0], &[1]]);
        assert!(matches!(is_shelling(&k, &[0, 0]), Err(Error::InvalidOrder(_))));
        assert!(matches!(is_shelling(&k, &[0]), Err(Error::InvalidOrder(_))));
    }

    #[test]
    fn full_complex_of_an_edge_and_cones() {
        let p = Poset::build(&["0", "1"], &[("0", "1")]).unwrap();
        let k = order_complex(&p, ComplexMode::Full).unwrap();
        assert_eq!(k.facets(), &[vec![0, 1]]);
        assert!(matches!(
            order_complex(&p, ComplexMode::Open(0, 1)),
            Err(Error::EmptyInterval(..))
        ));
        let diamond = Poset::build(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap();
        let k = order_complex(&diamond, ComplexMode::Full).unwrap();
        let h = homotopy_report(&k, &[0, 1]).unwrap();
        assert_eq!(h.total(), 0);
        assert_eq!(h.euler_from_faces, 1);
        let open = order_complex(&diamond, ComplexMode::Open(0, 3)).unwrap();
        let h = homotopy_report(&open, &[0, 1]).unwrap();
        assert_eq!(h.spheres.get(&0), Some(&1));
    }

    #[test]
    fn budget_on_facet_count() {
        let vs: Vec<String> = (0..10).map(|i| i.to_string()).collect();
        let fs: Vec<Vec<usize>> = (0..10).map(|i| vec![i]).collect();
        let k = OrderComplex::new(vs, fs).unwrap();
        assert!(matches!(
            brute_force_shellable(&k, &Limits::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
