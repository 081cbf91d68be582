use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, RwLock};

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::ideal::groebner::{buchberger, GroebnerBasis};
use crate::poly::{parse_poly, MonomialOrder, Polynomial, Ring};

/// Resource limits for Gröbner computations. Exceeding one is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_pairs: usize,
    pub max_degree: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_pairs: 200_000,
            max_degree: 64,
        }
    }
}

/// Content-addressed store of reduced Gröbner bases, keyed by ring, order and
/// the (sorted) generator list. Optionally mirrored to a directory of text files.
///
/// Concurrent inserts of the same key are harmless: entries are deterministic,
/// so the last writer stores the same value.
#[derive(Debug, Default)]
pub struct GbCache {
    memory: RwLock<HashMap<String, Arc<GroebnerBasis>>>,
    dir: Option<PathBuf>,
}

impl GbCache {
    pub fn in_memory() -> GbCache {
        GbCache::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> GbCache {
        GbCache {
            memory: RwLock::default(),
            dir: Some(dir.into()),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn key(ring: &Ring, order: MonomialOrder, gens: &[Polynomial]) -> String {
        let mut lines: Vec<String> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.to_string())
            .collect();
        lines.sort();
        lines.dedup();
        let mut h = Sha256::new();
        h.update(format!("{ring}\n{}\n", order.name()));
        for l in &lines {
            h.update(l.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }

    fn get(&self, key: &str, ring: &Ring, order: MonomialOrder) -> Option<Arc<GroebnerBasis>> {
        if let Some(gb) = self.memory.read().unwrap().get(key) {
            return Some(gb.clone());
        }
        let dir = self.dir.as_ref()?;
        let text = fs::read_to_string(dir.join(format!("{key}.gb"))).ok()?;
        let gb = parse_cache_file(&text, key, ring, order)?;
        self.memory
            .write()
            .unwrap()
            .insert(key.to_string(), gb.clone());
        Some(gb)
    }

    fn put(&self, key: &str, gens: &[Polynomial], gb: &Arc<GroebnerBasis>) {
        self.memory
            .write()
            .unwrap()
            .insert(key.to_string(), gb.clone());
        if let Some(dir) = &self.dir {
            // A failed write only costs a recomputation later.
            let _ = write_cache_file(dir, key, gens, gb);
        }
    }
}

fn write_cache_file(
    dir: &Path,
    key: &str,
    gens: &[Polynomial],
    gb: &GroebnerBasis,
) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut text = String::new();
    text.push_str("hilbloc-gb v2\n");
    text.push_str(&format!("ring: {}\n", gb.ring()));
    text.push_str(&format!("order: {}\n", gb.order().name()));
    text.push_str(&format!("generators: {}\n", gens.len()));
    for g in gens {
        text.push_str(&format!("{g}\n"));
    }
    text.push_str(&format!("basis: {}\n", gb.len()));
    for p in gb.polys() {
        text.push_str(&format!("{p}\n"));
    }
    let sum = body_checksum(&text);
    text.push_str(&format!("checksum: {sum}\n"));
    let tmp = dir.join(format!("{key}.gb.tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(text.as_bytes())?;
    f.sync_all()?;
    fs::rename(tmp, dir.join(format!("{key}.gb")))
}

fn body_checksum(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

/// Reads a cache file back. The body must match its trailing checksum, the
/// stored generators must hash to `key`, and they must reduce to zero modulo
/// the stored basis; anything else is ignored. The checksum catches
/// truncation and accidental edits; a deliberately forged file with a
/// recomputed checksum is not detected.
fn parse_cache_file(
    text: &str,
    key: &str,
    ring: &Ring,
    order: MonomialOrder,
) -> Option<Arc<GroebnerBasis>> {
    let at = text.rfind("checksum: ")?;
    let (body, tail) = text.split_at(at);
    if tail.strip_prefix("checksum: ")?.trim_end() != body_checksum(body) {
        return None;
    }
    let mut lines = body.lines();
    if lines.next()? != "hilbloc-gb v2" {
        return None;
    }
    if lines.next()?.strip_prefix("ring: ")? != ring.to_string() {
        return None;
    }
    if lines.next()?.strip_prefix("order: ")? != order.name() {
        return None;
    }
    let ngens: usize = lines.next()?.strip_prefix("generators: ")?.parse().ok()?;
    let mut gens = Vec::with_capacity(ngens);
    for _ in 0..ngens {
        gens.push(parse_poly(ring, lines.next()?).ok()?);
    }
    if GbCache::key(ring, order, &gens) != key {
        return None;
    }
    let nbasis: usize = lines.next()?.strip_prefix("basis: ")?.parse().ok()?;
    let mut polys = Vec::with_capacity(nbasis);
    for _ in 0..nbasis {
        polys.push(parse_poly(ring, lines.next()?).ok()?);
    }
    let gb = GroebnerBasis::from_polys(ring, order, polys);
    gens.iter().all(|g| gb.contains(g)).then_some(gb)
}

#[derive(Debug, Default)]
struct Stats {
    hits: AtomicUsize,
    computed: AtomicUsize,
}

/// Shared context for all ideal computations: resource bounds and the basis cache.
#[derive(Debug)]
pub struct Engine {
    bounds: Bounds,
    cache: Option<GbCache>,
    stats: Stats,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(Bounds::default(), Some(GbCache::in_memory()))
    }
}

impl Engine {
    pub fn new(bounds: Bounds, cache: Option<GbCache>) -> Engine {
        Engine {
            bounds,
            cache,
            stats: Stats::default(),
        }
    }

    pub fn without_cache() -> Engine {
        Engine::new(Bounds::default(), None)
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn cache(&self) -> Option<&GbCache> {
        self.cache.as_ref()
    }

    pub fn cache_hits(&self) -> usize {
        self.stats.hits.load(Ordering::Relaxed)
    }

    pub fn bases_computed(&self) -> usize {
        self.stats.computed.load(Ordering::Relaxed)
    }

    /// Reduced Gröbner basis of `(gens)` in `order`, consulting the cache.
    pub fn groebner(
        &self,
        ring: &Ring,
        gens: &[Polynomial],
        order: MonomialOrder,
    ) -> Result<Arc<GroebnerBasis>> {
        for g in gens {
            ring.ensure_same(g.ring())?;
        }
        let key = self.cache.as_ref().map(|_| GbCache::key(ring, order, gens));
        if let (Some(cache), Some(key)) = (&self.cache, &key) {
            if let Some(gb) = cache.get(key, ring, order) {
                self.stats.hits.fetch_add(1, Ordering::Relaxed);
                return Ok(gb);
            }
        }
        let terms = buchberger(gens, order, &self.bounds)?;
        self.stats.computed.fetch_add(1, Ordering::Relaxed);
        let gb = GroebnerBasis::from_terms_vec(ring, order, terms);
        if let (Some(cache), Some(key)) = (&self.cache, &key) {
            cache.put(key, gens, &gb);
        }
        Ok(gb)
    }
}
