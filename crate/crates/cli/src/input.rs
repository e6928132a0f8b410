//! Resolution of command-line inputs: `corpus:` URIs or file paths.

use std::fmt;
use std::path::Path;

use serde_json::Value;
use shellab_core::corpus::{resolve_uri, CorpusItem};
use shellab_core::io::{parse_complex, parse_poset, parse_rfas, LabelingDoc};
use shellab_core::{CeLabeling, Error, FirstAtomSet, Limits, OrderComplex, Poset};

/// A failure that is the caller's fault: bad arguments or unreadable input.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, InputError>;

pub fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(InputError(msg.into()))
}

#[allow(clippy::large_enum_variant)]
enum Source {
    Corpus(CorpusItem),
    File(String),
}

fn source(arg: &str) -> Result<Source> {
    if arg.starts_with("corpus:") {
        return Ok(Source::Corpus(resolve_uri(arg)?));
    }
    read_file(arg).map(Source::File)
}

pub fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| InputError(format!("{path}: {e}")))
}

pub fn poset(arg: &str) -> Result<Poset> {
    match source(arg)? {
        Source::Corpus(item) => Ok(item.example().poset.clone()),
        Source::File(text) => Ok(parse_poset(&text).map_err(|e| InputError(format!("{arg}: {e}")))?),
    }
}

/// A labeling together with the poset it labels.
pub struct LoadedLabeling {
    pub poset: Poset,
    pub labeling: CeLabeling,
    pub on_dual: bool,
}

/// Loads a labeling. A corpus labeling brings its own poset; a file needs `base`.
pub fn labeling(base: Option<&Poset>, arg: &str, limits: &Limits) -> Result<LoadedLabeling> {
    match source(arg)? {
        Source::Corpus(CorpusItem::Labeling(ex, i)) => {
            let l = &ex.labelings[i];
            if let Some(b) = base {
                if *b != ex.poset && *b != l.poset {
                    return fail(format!("{arg} labels a different poset"));
                }
            }
            Ok(LoadedLabeling {
                poset: l.poset.clone(),
                labeling: l.labeling.clone(),
                on_dual: l.on_dual,
            })
        }
        Source::Corpus(_) => fail(format!("{arg} is not a labeling")),
        Source::File(text) => {
            let base =
                base.ok_or_else(|| InputError(format!("{arg}: a poset is needed to read this labeling")))?;
            let doc = LabelingDoc::parse(&text).map_err(|e| InputError(format!("{arg}: {e}")))?;
            let poset = if doc.on_dual() { base.dual() } else { base.clone() };
            let labeling = doc
                .resolve(&poset, limits)
                .map_err(|e| InputError(format!("{arg}: {e}")))?;
            Ok(LoadedLabeling {
                poset,
                labeling,
                on_dual: doc.on_dual(),
            })
        }
    }
}

pub fn first_atom_set(base: Option<&Poset>, arg: &str, limits: &Limits) -> Result<(Poset, FirstAtomSet)> {
    match source(arg)? {
        Source::Corpus(CorpusItem::FirstAtomSet(ex, i)) => {
            if base.is_some_and(|b| *b != ex.poset) {
                return fail(format!("{arg} belongs to a different poset"));
            }
            Ok((ex.poset.clone(), ex.first_atom_sets[i].omega.clone()))
        }
        Source::Corpus(_) => fail(format!("{arg} is not a first atom set")),
        Source::File(text) => {
            let base =
                base.ok_or_else(|| InputError(format!("{arg}: a poset is needed to read this file")))?;
            let omega = parse_rfas(base, &text, limits).map_err(|e| InputError(format!("{arg}: {e}")))?;
            Ok((base.clone(), omega))
        }
    }
}

/// `[poset] item`: the poset may be left out when the item is a corpus URI.
pub fn split_pair(args: &[String]) -> Result<(Option<Poset>, &str)> {
    match args {
        [item] => Ok((None, item)),
        [p, item] => Ok((Some(poset(p)?), item)),
        _ => fail("expected `[POSET] ITEM`"),
    }
}

pub enum Shellable {
    Poset(Poset),
    Complex(OrderComplex),
}

/// A poset or a simplicial complex, told apart by the `facets` key.
pub fn poset_or_complex(arg: &str) -> Result<Shellable> {
    match source(arg)? {
        Source::Corpus(item) => Ok(Shellable::Poset(item.example().poset.clone())),
        Source::File(text) => {
            let v: Value = serde_json::from_str(&text).map_err(|e| InputError(format!("{arg}: {e}")))?;
            let parsed = if v.get("facets").is_some() {
                parse_complex(&text).map(Shellable::Complex)
            } else {
                parse_poset(&text).map(Shellable::Poset)
            };
            parsed.map_err(|e| InputError(format!("{arg}: {e}")))
        }
    }
}

/// One facet per line as vertex names; returns facet indices in file order.
pub fn facet_order(k: &OrderComplex, text: &str) -> Result<Vec<usize>> {
    let mut order = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        let line = line.trim_start_matches('{').trim_end_matches('}');
        if line.trim().is_empty() {
            continue;
        }
        let mut f = Vec::new();
        for t in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            match k.vertices().iter().position(|v| v == t) {
                Some(i) => f.push(i),
                None => return fail(format!("unknown vertex `{t}`")),
            }
        }
        f.sort_unstable();
        match k.facets().iter().position(|g| *g == f) {
            Some(i) => order.push(i),
            None => return fail(format!("`{line}` is not a facet")),
        }
    }
    Ok(order)
}
