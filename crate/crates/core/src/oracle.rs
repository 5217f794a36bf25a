//! Ground-truth m-to-1 classification by exhaustive fiber counting.
//!
//! A map on a finite set of size N is m-to-1 when exactly ⌊N/m⌋ images
//! have exactly m preimages; the remaining N mod m elements form the
//! exceptional set.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("m = {m} is outside 1..={domain_size}")]
    MOutOfRange { m: u64, domain_size: u64 },
}

/// Fibers of a map together with every m for which it is m-to-1.
#[derive(Debug, Clone)]
pub struct Classification<D, I> {
    domain_size: u64,
    fibers: BTreeMap<I, Vec<D>>,
    valid_ms: Vec<u64>,
}

/// Fiber map of `f` over `domain`, keyed by image.
pub fn fiber_histogram<D, I, F>(domain: impl IntoIterator<Item = D>, f: F) -> BTreeMap<I, Vec<D>>
where
    I: Ord,
    F: Fn(D) -> I,
    D: Copy,
{
    let mut fibers: BTreeMap<I, Vec<D>> = BTreeMap::new();
    for x in domain {
        fibers.entry(f(x)).or_default().push(x);
    }
    fibers
}

/// Classifies `f` on `domain`.
pub fn classify<D, I, F>(domain: impl IntoIterator<Item = D>, f: F) -> Classification<D, I>
where
    D: Copy,
    I: Ord,
    F: Fn(D) -> I,
{
    Classification::from_fibers(fiber_histogram(domain, f))
}

/// Valid m from a fiber-size histogram (size -> number of fibers).
pub fn valid_ms_from_sizes(domain_size: u64, sizes: &BTreeMap<u64, u64>) -> Vec<u64> {
    // a size that never occurs cannot satisfy count = ⌊N/m⌋ >= 1
    sizes
        .iter()
        .filter(|&(&m, &count)| m >= 1 && m <= domain_size && count == domain_size / m)
        .map(|(&m, _)| m)
        .collect()
}

impl<D: Copy, I: Ord> Classification<D, I> {
    pub fn from_fibers(fibers: BTreeMap<I, Vec<D>>) -> Self {
        let domain_size = fibers.values().map(|v| v.len() as u64).sum();
        let mut sizes = BTreeMap::new();
        for v in fibers.values() {
            *sizes.entry(v.len() as u64).or_insert(0u64) += 1;
        }
        let valid_ms = valid_ms_from_sizes(domain_size, &sizes);
        Classification {
            domain_size,
            fibers,
            valid_ms,
        }
    }

    pub fn domain_size(&self) -> u64 {
        self.domain_size
    }

    pub fn fibers(&self) -> &BTreeMap<I, Vec<D>> {
        &self.fibers
    }

    /// Number of fibers of each size.
    pub fn size_histogram(&self) -> BTreeMap<u64, u64> {
        let mut sizes = BTreeMap::new();
        for v in self.fibers.values() {
            *sizes.entry(v.len() as u64).or_insert(0) += 1;
        }
        sizes
    }

    /// Ascending list of every m for which the map is m-to-1.
    pub fn valid_ms(&self) -> &[u64] {
        &self.valid_ms
    }

    pub fn is_m_to_1(&self, m: u64) -> Result<bool, OracleError> {
        if m == 0 || m > self.domain_size {
            return Err(OracleError::MOutOfRange {
                m,
                domain_size: self.domain_size,
            });
        }
        Ok(self.valid_ms.binary_search(&m).is_ok())
    }

    /// Union of the fibers whose size differs from `m`, or `None` if the
    /// map is not m-to-1.
    pub fn exceptional_set(&self, m: u64) -> Option<Vec<D>> {
        if self.valid_ms.binary_search(&m).is_err() {
            return None;
        }
        Some(
            self.fibers
                .values()
                .filter(|v| v.len() as u64 != m)
                .flat_map(|v| v.iter().copied())
                .collect(),
        )
    }

    /// `{domain_size, histogram, valid_ms, exceptional}` with elements
    /// rendered by the caller.
    pub fn to_json(&self, render_domain: impl Fn(&D) -> Value, render_image: impl Fn(&I) -> Value) -> Value {
        let histogram: Vec<Value> = self
            .fibers
            .iter()
            .map(|(img, pre)| json!({ "image": render_image(img), "preimages": pre.len() }))
            .collect();
        let mut exceptional = serde_json::Map::new();
        for &m in &self.valid_ms {
            let set = self.exceptional_set(m).unwrap_or_default();
            exceptional.insert(m.to_string(), Value::Array(set.iter().map(&render_domain).collect()));
        }
        json!({
            "domain_size": self.domain_size,
            "histogram": histogram,
            "valid_ms": self.valid_ms,
            "exceptional": exceptional,
        })
    }
}

/// Reusable counter for the hot path: classifies a map whose images are
/// given as indices below a fixed codomain size, without allocating.
#[derive(Debug, Clone)]
pub struct FiberCounter {
    counts: Vec<u32>,
    touched: Vec<u32>,
    sizes: Vec<u32>,
}

impl FiberCounter {
    pub fn new(codomain_size: usize) -> Self {
        FiberCounter {
            counts: vec![0; codomain_size],
            touched: Vec::new(),
            sizes: vec![0; codomain_size + 1],
        }
    }

    /// Valid m for the map whose image indices are `values`; the domain
    /// size is the number of values.
    pub fn valid_ms<It: IntoIterator<Item = u32>>(&mut self, values: It) -> Vec<u64> {
        let mut n = 0usize;
        for v in values {
            let c = &mut self.counts[v as usize];
            if *c == 0 {
                self.touched.push(v);
            }
            *c += 1;
            n += 1;
        }
        if self.sizes.len() < n + 1 {
            self.sizes.resize(n + 1, 0);
        }
        for &v in &self.touched {
            self.sizes[self.counts[v as usize] as usize] += 1;
        }
        let mut out = Vec::new();
        for &v in &self.touched {
            let s = self.counts[v as usize] as usize;
            if self.sizes[s] != 0 {
                if self.sizes[s] as usize == n / s {
                    out.push(s as u64);
                }
                self.sizes[s] = 0;
            }
        }
        for &v in &self.touched {
            self.counts[v as usize] = 0;
        }
        self.touched.clear();
        out.sort_unstable();
        out
    }
}

/// Is the map with image indices `values` m-to-1?
pub fn is_m_to_1<D: Copy, I: Ord>(c: &Classification<D, I>, m: u64) -> Result<bool, OracleError> {
    c.is_m_to_1(m)
}

/// Fiber classification of any map given by a table of image values.
pub fn classify_table<I: Ord + Copy>(values: &[I]) -> Classification<usize, I> {
    classify(0..values.len(), |i| values[i])
}
