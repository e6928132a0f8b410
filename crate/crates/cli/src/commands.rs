use rayon::prelude::*;
use serde_json::{json, Value};

use shellab_core::chain::{chains_between, maximal_chains, maximal_chains_rooted, Limits};
use shellab_core::corpus::{self, check_expectations, fixture_text, load_named};
use shellab_core::io::{
    chain_order_to_text, labeling_to_json, parse_chain_order, parse_rao_tree, rao_tree_to_json, rfas_to_json,
};
use shellab_core::labeling::{descent_set, lex_order_max_chains};
use shellab_core::rao::{
    find_grao, find_rao, obstructions_cover_all_pairs, rao_pair_obstructions, verify_grao, verify_rao,
};
use shellab_core::relabel::{verify_block_structure, verify_label_bound};
use shellab_core::rfas::{
    check_lc, check_rfas, compatible_labeling, is_compatible, rfas_from_tcl, shelling_from_rfas, RfasOptions,
};
use shellab_core::shelling::{
    brute_force_shellable, homotopy_report, is_shelling, order_complex, ComplexMode,
};
use shellab_core::{classify, relabel_from_order, Chain, Error, MaxChainOrder, Poset, Property};

use crate::input::{self, fail, InputError, Result, Shellable};
use crate::report::Report;

fn chain_json(p: &Poset, c: &Chain) -> Value {
    json!(c.names(p))
}

fn order_output(r: &mut Report, p: &Poset, gamma: &MaxChainOrder) {
    let chains: Vec<Value> = gamma.chains().iter().map(|c| chain_json(p, c)).collect();
    r.set_output(json!({ "chains": chains }), chain_order_to_text(p, gamma));
}

fn write_file(path: &str, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| InputError(format!("{path}: {e}")))
}

/// Sends an artifact to `out` if given, otherwise into the report.
fn emit(r: &mut Report, out: Option<&str>, json: Value, text: String) -> Result<()> {
    match out {
        Some(path) => write_file(path, &text),
        None => {
            r.set_output(json, text);
            Ok(())
        }
    }
}

pub fn chains(r: &mut Report, poset: &str, rooted: Option<&[String]>, root: Option<&str>) -> Result<()> {
    let p = input::poset(poset)?;
    let list = match (rooted, root) {
        (None, None) => maximal_chains(&p),
        (Some([x, y]), None) => chains_between(&p, p.index_of(x)?, p.index_of(y)?),
        (Some([_, y]), Some(root)) => {
            let root = root
                .split(',')
                .map(|t| p.index_of(t.trim()))
                .collect::<shellab_core::Result<Vec<_>>>()?;
            maximal_chains_rooted(&p, &root, p.index_of(y)?)?
        }
        (None, Some(_)) => return fail("--root needs --rooted X Y"),
        _ => return fail("--rooted takes two elements"),
    };
    r.mark("enumerate");
    let text: String = list.iter().map(|c| c.display(&p) + "\n").collect();
    let json = json!({
        "count": list.len(),
        "chains": list.iter().map(|c| chain_json(&p, c)).collect::<Vec<_>>(),
    });
    r.set_output(json, text);
    Ok(())
}

pub fn check(r: &mut Report, kind: Property, args: &[String], limits: &Limits) -> Result<()> {
    let (base, lab) = input::split_pair(args)?;
    let l = input::labeling(base.as_ref(), lab, limits)?;
    r.mark("load");
    let report = classify(&l.poset, &l.labeling, limits)?;
    r.mark("classify");
    r.require(kind.as_str(), report.holds(kind));
    for k in Property::ALL.into_iter().filter(|&k| k != kind) {
        r.note(k.as_str(), report.holds(k));
    }
    r.note("root-independent", report.root_independent);
    if let Some(w) = report.witness(kind) {
        r.witness(w.describe(&l.poset));
    }
    Ok(())
}

pub struct RelabelArgs<'a> {
    pub poset: Option<&'a str>,
    pub from_labeling: Option<&'a str>,
    pub order_file: Option<&'a str>,
    pub tie_break: bool,
    pub out: Option<&'a str>,
}

pub fn relabel(r: &mut Report, a: RelabelArgs<'_>, limits: &Limits) -> Result<()> {
    let base = a.poset.map(input::poset).transpose()?;
    let (p, source, on_dual, gamma) = match (a.from_labeling, a.order_file) {
        (Some(lab), None) => {
            let l = input::labeling(base.as_ref(), lab, limits)?;
            let gamma = lex_order_max_chains(&l.poset, &l.labeling, a.tie_break)?;
            (l.poset, Some(l.labeling), l.on_dual, gamma)
        }
        (None, Some(path)) => {
            let p = base.ok_or_else(|| InputError("--order-file needs a poset".into()))?;
            let gamma = parse_chain_order(&p, &input::read_file(path)?)?;
            (p, None, false, gamma)
        }
        _ => return fail("give exactly one of --order-from-labeling and --order-file"),
    };
    r.mark("order");
    let lab = relabel_from_order(&p, &gamma);
    r.mark("relabel");
    r.require("block-structure", verify_block_structure(&p, &gamma, &lab));
    r.require("label-bound", verify_label_bound(&p, &gamma, &lab));
    let report = classify(&p, &lab, limits)?;
    r.note("cc", report.cc);
    r.note("tcl", report.tcl);
    if let Some(src) = &source {
        let same = descent_set(&p, src, limits)? == descent_set(&p, &lab, limits)?;
        r.note("same-descents", same);
    }
    r.mark("verify");
    let text = labeling_to_json(&p, &lab, on_dual);
    let json: Value = serde_json::from_str(&text).expect("labeling documents are JSON");
    emit(r, a.out, json, text)
}

pub fn rfas_check(
    r: &mut Report,
    args: &[String],
    literal_ii: bool,
    limits: &Limits,
    max_witnesses: usize,
) -> Result<()> {
    let (base, item) = input::split_pair(args)?;
    let (p, omega) = input::first_atom_set(base.as_ref(), item, limits)?;
    r.mark("load");
    let rep = check_rfas(&p, &omega, RfasOptions { literal_ii }, limits)?;
    r.mark("check");
    r.note("condition-i", rep.condition_i);
    r.note("condition-ii", rep.condition_ii);
    r.require("rfas", rep.ok());
    for v in rep.violations.iter().take(max_witnesses) {
        r.witness(v.describe(&p));
    }
    Ok(())
}

pub fn rfas_shell(
    r: &mut Report,
    args: &[String],
    literal_ii: bool,
    limits: &Limits,
    max_witnesses: usize,
) -> Result<()> {
    let (base, item) = input::split_pair(args)?;
    let (p, omega) = input::first_atom_set(base.as_ref(), item, limits)?;
    let rep = check_rfas(&p, &omega, RfasOptions { literal_ii }, limits)?;
    r.mark("check");
    r.require("rfas", rep.ok());
    if !rep.ok() {
        for v in rep.violations.iter().take(max_witnesses) {
            r.witness(v.describe(&p));
        }
        return Ok(());
    }
    let gamma = shelling_from_rfas(&p, &omega, limits)?;
    r.mark("extend");
    let k = order_complex(&p, ComplexMode::Full)?;
    let check = is_shelling(&k, &k.order_from_chains(gamma.chains())?)?;
    r.mark("verify");
    r.require("shelling", check.ok);
    if let Some((j, why)) = check.first_violation {
        r.witness(format!("facet {}: {why}", j + 1));
    }
    order_output(r, &p, &gamma);
    Ok(())
}

pub fn rfas_from_tcl_cmd(r: &mut Report, args: &[String], limits: &Limits, out: Option<&str>) -> Result<()> {
    let (base, lab) = input::split_pair(args)?;
    let l = input::labeling(base.as_ref(), lab, limits)?;
    r.mark("load");
    let omega = match rfas_from_tcl(&l.poset, &l.labeling, limits) {
        Ok(o) => o,
        Err(e @ (Error::NotTcl(_) | Error::RelabelNotTcl(_))) => {
            r.require("tcl-relabel", false);
            r.witness(e.to_string());
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    r.mark("construct");
    r.require("tcl-relabel", true);
    r.require(
        "rfas",
        check_rfas(&l.poset, &omega, RfasOptions::default(), limits)?.ok(),
    );
    r.mark("check");
    let text = rfas_to_json(&l.poset, &omega);
    let json: Value = serde_json::from_str(&text).expect("first atom documents are JSON");
    emit(r, out, json, text)
}

pub fn lc_check(r: &mut Report, args: &[String], emit_labeling: bool, limits: &Limits) -> Result<()> {
    let (base, item) = input::split_pair(args)?;
    let (p, omega) = input::first_atom_set(base.as_ref(), item, limits)?;
    r.mark("load");
    let Some(gamma) = check_lc(&p, &omega, limits)? else {
        r.require("lc", false);
        r.witness(Error::NoLcExtension.to_string());
        return Ok(());
    };
    r.mark("search");
    r.require("lc", true);
    if emit_labeling {
        let lab = compatible_labeling(&p, &omega, limits)?;
        r.note("compatible", is_compatible(&p, &lab, &omega, limits)?);
        let text = labeling_to_json(&p, &lab, false);
        let json: Value = serde_json::from_str(&text).expect("labeling documents are JSON");
        r.set_output(json, text);
    } else {
        order_output(r, &p, &gamma);
    }
    Ok(())
}

pub struct RaoArgs<'a> {
    pub poset: &'a str,
    pub grao: bool,
    pub certificate: Option<&'a str>,
    pub verify: Option<&'a str>,
}

pub fn rao(r: &mut Report, a: RaoArgs<'_>, limits: &Limits) -> Result<()> {
    let p = input::poset(a.poset)?;
    let name = if a.grao { "grao" } else { "rao" };
    if let Some(path) = a.verify {
        let tree = parse_rao_tree(&p, &input::read_file(path)?)?;
        let ok = if a.grao {
            verify_grao(&p, &tree)?
        } else {
            verify_rao(&p, &tree)?
        };
        r.mark("verify");
        r.require(name, ok);
        return Ok(());
    }
    let found = if a.grao {
        find_grao(&p, limits)?
    } else {
        find_rao(&p, limits)?
    };
    r.mark("search");
    r.require(name, found.is_some());
    match found {
        Some(tree) => {
            let cert = rao_tree_to_json(&p, &tree);
            let text = format!("atoms: {}\n", tree.atom_names(&p).join(", "));
            if let Some(path) = a.certificate {
                write_file(
                    path,
                    &(serde_json::to_string_pretty(&cert).expect("certificates serialize") + "\n"),
                )?;
                r.set_output(json!({ "atoms": tree.atom_names(&p) }), text);
            } else {
                r.set_output(json!({ "atoms": tree.atom_names(&p), "certificate": cert }), text);
            }
        }
        None => {
            let obs = rao_pair_obstructions(&p);
            r.note("all-pairs-obstructed", obstructions_cover_all_pairs(&p, &obs));
            for o in &obs {
                r.witness(o.describe(&p));
            }
        }
    }
    Ok(())
}

pub struct ShellingArgs<'a> {
    pub input: &'a str,
    pub order: Option<&'a str>,
    pub from_labeling: Option<&'a str>,
    pub from_rfas: Option<&'a str>,
    pub brute_force: bool,
}

pub fn shelling_verify(r: &mut Report, a: ShellingArgs<'_>, limits: &Limits) -> Result<()> {
    let given = [
        a.order.is_some(),
        a.from_labeling.is_some(),
        a.from_rfas.is_some(),
        a.brute_force,
    ];
    if given.iter().filter(|&&g| g).count() != 1 {
        return fail("give exactly one of --order, --from-labeling, --from-rfas and --brute-force");
    }
    let (k, order) = match input::poset_or_complex(a.input)? {
        Shellable::Complex(k) => {
            if a.from_labeling.is_some() || a.from_rfas.is_some() {
                return fail("labelings and first atom sets need a poset, not a complex");
            }
            let order = match a.order {
                Some(path) => Some(input::facet_order(&k, &input::read_file(path)?)?),
                None => None,
            };
            (k, order)
        }
        Shellable::Poset(p) => {
            let k = order_complex(&p, ComplexMode::Full)?;
            let chains = if let Some(path) = a.order {
                Some(parse_chain_order(&p, &input::read_file(path)?)?)
            } else if let Some(lab) = a.from_labeling {
                let l = input::labeling(Some(&p), lab, limits)?;
                if l.on_dual {
                    return fail(format!("{lab} labels the dual poset"));
                }
                Some(lex_order_max_chains(&p, &l.labeling, true)?)
            } else if let Some(item) = a.from_rfas {
                let (_, omega) = input::first_atom_set(Some(&p), item, limits)?;
                match shelling_from_rfas(&p, &omega, limits) {
                    Ok(g) => Some(g),
                    Err(e @ Error::NotAnRfas(_)) => {
                        r.require("shelling", false);
                        r.witness(e.to_string());
                        return Ok(());
                    }
                    Err(e) => return Err(e.into()),
                }
            } else {
                None
            };
            let order = chains.map(|g| k.order_from_chains(g.chains())).transpose()?;
            (k, order)
        }
    };
    r.mark("load");
    let order = match order {
        Some(o) => o,
        None => {
            let found = brute_force_shellable(&k, limits)?;
            r.mark("search");
            r.require("shellable", found.order.is_some());
            let Some(o) = found.order else {
                r.witness(format!(
                    "no shelling among the orders of {} facets",
                    k.facets().len()
                ));
                return Ok(());
            };
            o
        }
    };
    let check = is_shelling(&k, &order)?;
    r.mark("verify");
    r.require("shelling", check.ok);
    if let Some((j, why)) = &check.first_violation {
        r.witness(format!("facet {} of the order: {why}", j + 1));
        return Ok(());
    }
    let h = homotopy_report(&k, &order)?;
    let facets: Vec<Vec<&str>> = order.iter().map(|&f| k.facet_names(f)).collect();
    let spheres: serde_json::Map<String, Value> =
        h.spheres.iter().map(|(d, c)| (d.to_string(), json!(c))).collect();
    let mut text: String = facets.iter().map(|f| format!("{{{}}}\n", f.join(","))).collect();
    for (d, c) in &h.spheres {
        text.push_str(&format!("# {c} sphere(s) of dimension {d}\n"));
    }
    text.push_str(&format!("# euler characteristic {}\n", h.euler_from_faces));
    r.note("euler-consistent", h.consistent());
    r.set_output(
        json!({ "facets": facets, "spheres": spheres, "euler_characteristic": h.euler_from_faces }),
        text,
    );
    Ok(())
}

pub fn corpus(
    r: &mut Report,
    names: &[String],
    list: bool,
    show: Option<&str>,
    limits: &Limits,
) -> Result<()> {
    if let Some(path) = show {
        let path = path.strip_prefix("corpus:").unwrap_or(path);
        let path = if path.ends_with(".json") {
            path.to_string()
        } else {
            format!("{path}.json")
        };
        let text = fixture_text(&path).ok_or_else(|| InputError(format!("no fixture `{path}`")))?;
        let json: Value = serde_json::from_str(text).expect("fixtures are JSON");
        r.set_output(json, text.to_string());
        return Ok(());
    }
    let all = corpus::names();
    if list {
        let text: String = all.iter().map(|n| n.clone() + "\n").collect();
        r.set_output(json!(all), text);
        return Ok(());
    }
    let chosen: Vec<String> = if names.is_empty() { all } else { names.to_vec() };
    let results: Vec<_> = chosen
        .par_iter()
        .map(|n| load_named(n).and_then(|ex| check_expectations(&ex, limits)))
        .collect::<shellab_core::Result<_>>()?;
    r.mark("check");
    for checks in results {
        for c in checks {
            r.require(&format!("{} is {}", c.what, c.expected), c.ok());
            if !c.ok() {
                r.witness(format!("{}: expected {}, got {}", c.what, c.expected, c.actual));
            }
        }
    }
    Ok(())
}

pub fn export_dot(r: &mut Report, poset: &str, out: Option<&str>) -> Result<()> {
    let p = input::poset(poset)?;
    let dot = p.to_dot();
    emit(r, out, json!({ "dot": dot }), dot.clone())
}
