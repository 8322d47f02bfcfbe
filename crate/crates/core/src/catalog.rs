//! Deduplicated catalogs of canonical graphs, kept as sorted graph6 keys,
//! with per-edge-count tallies and a graph6 + JSON on-disk layout.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::canon::canonical_key;
use crate::error::{Error, Result};
use crate::graph::{is_ramsey_st, Graph, RamseyType};
use crate::graph6;

/// Generator id plus the parameters that produced a catalog.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub params: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(generator: impl Into<String>) -> Self {
        Provenance {
            generator: generator.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }
}

/// Row of a Table-1-style summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogSummary {
    pub n: usize,
    pub total: u64,
    pub e_min: Option<usize>,
    pub e_max: Option<usize>,
    pub n_at_e_min: u64,
    pub n_at_e_min_plus_1: u64,
    pub n_at_e_max_minus_1: u64,
    pub n_at_e_max: u64,
}

/// Canonical members of `R(s,t,n)` within optional inclusive edge bounds.
///
/// `s` and `t` are stored raw so that the degenerate classes used as cone
/// bases (e.g. `R(1,t)`, which holds only the null graph) can be catalogued.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    s: usize,
    t: usize,
    n: usize,
    e_min: Option<usize>,
    e_max: Option<usize>,
    members: BTreeSet<Box<[u8]>>,
    counts: BTreeMap<usize, u64>,
    pub provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct Metadata {
    s: usize,
    t: usize,
    n: usize,
    e_min: Option<usize>,
    e_max: Option<usize>,
    total: u64,
    counts: BTreeMap<usize, u64>,
    provenance: Provenance,
}

impl Catalog {
    pub fn new(rt: RamseyType, n: usize) -> Self {
        Self::with_bounds(rt.s, rt.t, n, None, None)
    }

    pub fn with_bounds(
        s: usize,
        t: usize,
        n: usize,
        e_min: Option<usize>,
        e_max: Option<usize>,
    ) -> Self {
        Catalog {
            s,
            t,
            n,
            e_min,
            e_max,
            members: BTreeSet::new(),
            counts: BTreeMap::new(),
            provenance: Provenance::default(),
        }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// The Ramsey type, when both bounds are at least 2.
    pub fn ramsey_type(&self) -> Option<RamseyType> {
        RamseyType::new(self.s, self.t).ok()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_bounds(&self) -> (Option<usize>, Option<usize>) {
        (self.e_min, self.e_max)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Histogram of members by edge count.
    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn count_with_edges(&self, e: usize) -> u64 {
        self.counts.get(&e).copied().unwrap_or(0)
    }

    /// Canonical graph6 keys in lexicographic order.
    pub fn keys(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.members.iter().map(|k| &k[..])
    }

    /// Decoded members in key order.
    pub fn graphs(&self) -> impl Iterator<Item = Graph> + '_ {
        self.members
            .iter()
            .map(|k| graph6::decode(k).expect("catalog keys are valid graph6"))
    }

    pub fn contains(&self, g: &Graph) -> bool {
        g.order() == self.n && self.members.contains(canonical_key(g).as_slice())
    }

    pub fn contains_key(&self, key: &[u8]) -> bool {
        self.members.contains(key)
    }

    fn within_bounds(&self, e: usize) -> bool {
        self.e_min.is_none_or(|lo| e >= lo) && self.e_max.is_none_or(|hi| e <= hi)
    }

    fn validate(&self, g: &Graph) -> Result<()> {
        if g.order() != self.n {
            return Err(Error::Validation(format!(
                "order {} does not match catalog order {}",
                g.order(),
                self.n
            )));
        }
        if !is_ramsey_st(g, self.s, self.t) {
            return Err(Error::Validation(format!(
                "graph is not Ramsey of type ({},{})",
                self.s, self.t
            )));
        }
        let e = g.edge_count();
        if !self.within_bounds(e) {
            return Err(Error::Validation(format!("edge count {e} outside catalog bounds")));
        }
        Ok(())
    }

    /// Canonicalises, validates and inserts; `Ok(false)` on a duplicate.
    pub fn insert(&mut self, g: &Graph) -> Result<bool> {
        self.validate(g)?;
        let key = canonical_key(g);
        Ok(self.insert_raw(key.into_boxed_slice(), g.edge_count()))
    }

    /// Inserts a key already known to be canonical. The graph it encodes is
    /// still validated.
    pub fn insert_canonical(&mut self, key: &[u8]) -> Result<bool> {
        if self.members.contains(key) {
            return Ok(false);
        }
        let g = graph6::decode(key)?;
        self.validate(&g)?;
        debug_assert_eq!(canonical_key(&g), key);
        Ok(self.insert_raw(key.into(), g.edge_count()))
    }

    /// Inserts a key produced by this crate's own canonical labelling.
    pub(crate) fn insert_trusted(&mut self, key: Box<[u8]>) -> Result<bool> {
        let e = graph6::edge_count(&key)?;
        if !self.within_bounds(e) {
            return Err(Error::Validation(format!("edge count {e} outside catalog bounds")));
        }
        Ok(self.insert_raw(key, e))
    }

    fn insert_raw(&mut self, key: Box<[u8]>, edges: usize) -> bool {
        let fresh = self.members.insert(key);
        if fresh {
            *self.counts.entry(edges).or_insert(0) += 1;
        }
        fresh
    }

    fn same_spec(&self, other: &Catalog) -> bool {
        (self.s, self.t, self.n, self.e_min, self.e_max)
            == (other.s, other.t, other.n, other.e_min, other.e_max)
    }

    /// Set union of two catalogs over the same class and bounds.
    pub fn merge(mut self, other: Catalog) -> Result<Catalog> {
        if !self.same_spec(&other) {
            return Err(Error::CatalogMismatch(format!(
                "cannot merge {} with {}",
                self.dir_name(),
                other.dir_name()
            )));
        }
        if self.members.len() < other.members.len() {
            return other.merge(self);
        }
        for key in other.members {
            let e = graph6::edge_count(&key)?;
            self.insert_raw(key, e);
        }
        Ok(self)
    }

    /// Sub-catalog of members passing `keep`, with bounds tightened to `bounds`.
    pub fn retain_graphs(
        &self,
        bounds: (Option<usize>, Option<usize>),
        mut keep: impl FnMut(&Graph) -> bool,
    ) -> Catalog {
        let mut out = Catalog::with_bounds(self.s, self.t, self.n, bounds.0, bounds.1);
        out.provenance = self.provenance.clone();
        for key in &self.members {
            let g = graph6::decode(key).expect("valid key");
            let e = g.edge_count();
            if out.within_bounds(e) && keep(&g) {
                out.insert_raw(key.clone(), e);
            }
        }
        out
    }

    pub fn summary(&self) -> CatalogSummary {
        let e_min = self.counts.keys().next().copied();
        let e_max = self.counts.keys().next_back().copied();
        let at = |e: Option<usize>| e.map_or(0, |e| self.count_with_edges(e));
        CatalogSummary {
            n: self.n,
            total: self.members.len() as u64,
            e_min,
            e_max,
            n_at_e_min: at(e_min),
            n_at_e_min_plus_1: at(e_min.map(|e| e + 1)),
            n_at_e_max_minus_1: at(e_max.and_then(|e| e.checked_sub(1))),
            n_at_e_max: at(e_max),
        }
    }

    /// Directory name `r{s}-{t}-n{n}[-e{lo}-{hi}]`.
    pub fn dir_name(&self) -> String {
        let mut name = format!("r{}-{}-n{}", self.s, self.t, self.n);
        if self.e_min.is_some() || self.e_max.is_some() {
            let lo = self.e_min.unwrap_or(0);
            let hi = self.e_max.unwrap_or(self.n * self.n.saturating_sub(1) / 2);
            name.push_str(&format!("-e{lo}-{hi}"));
        }
        name
    }

    /// Writes the catalog into `parent/<dir_name>/` and returns that path:
    /// one `e{edges}.g6` shard per edge count, keys sorted, plus `meta.json`.
    pub fn save(&self, parent: &Path) -> Result<PathBuf> {
        let dir = parent.join(self.dir_name());
        self.save_to(&dir)?;
        Ok(dir)
    }

    pub fn save_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|x| x == "g6") {
                fs::remove_file(path)?;
            }
        }
        let mut shards: BTreeMap<usize, BufWriter<fs::File>> = BTreeMap::new();
        for key in &self.members {
            let e = graph6::edge_count(key)?;
            if !shards.contains_key(&e) {
                let f = fs::File::create(dir.join(shard_name(e)))?;
                shards.insert(e, BufWriter::new(f));
            }
            let w = shards.get_mut(&e).unwrap();
            w.write_all(key)?;
            w.write_all(b"\n")?;
        }
        for (_, mut w) in shards {
            w.flush()?;
        }
        let meta = Metadata {
            s: self.s,
            t: self.t,
            n: self.n,
            e_min: self.e_min,
            e_max: self.e_max,
            total: self.members.len() as u64,
            counts: self.counts.clone(),
            provenance: self.provenance.clone(),
        };
        let mut text = serde_json::to_string_pretty(&meta)?;
        text.push('\n');
        fs::write(dir.join("meta.json"), text)?;
        Ok(())
    }

    /// Loads a catalog directory, re-validating every member and checking
    /// the tallies against the metadata.
    pub fn load(dir: &Path) -> Result<Catalog> {
        let meta: Metadata = serde_json::from_slice(&fs::read(dir.join("meta.json"))?)?;
        let mut cat = Catalog::with_bounds(meta.s, meta.t, meta.n, meta.e_min, meta.e_max);
        cat.provenance = meta.provenance;
        let mut files: Vec<PathBuf> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "g6"))
            .collect();
        files.sort();
        for path in files {
            let reader = BufReader::new(fs::File::open(&path)?);
            for line in reader.split(b'\n') {
                let line = line?;
                let line = line.trim_ascii();
                if line.is_empty() {
                    continue;
                }
                let g = graph6::decode(line)?;
                cat.validate(&g)?;
                let key = canonical_key(&g);
                if key != line {
                    return Err(Error::Validation(format!(
                        "{} holds a non-canonical member",
                        path.display()
                    )));
                }
                cat.insert_raw(key.into_boxed_slice(), g.edge_count());
            }
        }
        if cat.members.len() as u64 != meta.total || cat.counts != meta.counts {
            return Err(Error::Validation(format!(
                "{}: member tallies disagree with meta.json",
                dir.display()
            )));
        }
        Ok(cat)
    }
}

fn shard_name(edges: usize) -> String {
    format!("e{edges:04}.g6")
}
