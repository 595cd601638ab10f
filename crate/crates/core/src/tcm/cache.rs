use std::fmt::Write as _;
use std::hash::Hasher;

use fnv::FnvHasher;
use rayon::prelude::*;

use super::{alpha_from_sums, TcmConfig, TcmError};
use crate::data::DataSet;
use crate::distance::DistanceSpec;

const MAGIC: &str = "TCMNN-CACHE v1";

/// Stored neighbour distances of one training example.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheEntry {
    pub label: usize,
    /// Up to `k` smallest distances to other examples of the same class, ascending.
    pub same_k: Vec<f64>,
    /// Up to `k` smallest distances to examples of other classes, ascending.
    pub other_k: Vec<f64>,
    pub(crate) same_sum: f64,
    pub(crate) other_sum: f64,
    pub alpha_base: f64,
}

impl CacheEntry {
    pub(crate) fn new(label: usize, same_k: Vec<f64>, other_k: Vec<f64>) -> Self {
        let same_sum = ascending_sum(&same_k);
        let other_sum = ascending_sum(&other_k);
        CacheEntry {
            label,
            same_k,
            other_k,
            same_sum,
            other_sum,
            alpha_base: alpha_from_sums(same_sum, other_sum),
        }
    }
}

/// Partial strangeness values of a training set for one `(k, spec)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrangenessCache {
    k: usize,
    spec: DistanceSpec,
    fingerprint: u64,
    entries: Vec<CacheEntry>,
}

impl StrangenessCache {
    /// Computes the neighbour lists of every training example.
    pub fn build(train: &DataSet, config: &TcmConfig) -> Result<Self, TcmError> {
        config.validate_for(train)?;
        Ok(Self::build_unchecked(train, config))
    }

    /// Builds without the class-size checks. Pools smaller than `k` keep
    /// whatever distances exist.
    pub(crate) fn build_unchecked(train: &DataSet, config: &TcmConfig) -> Self {
        let l = train.len();
        let k = config.k;
        let entries = (0..l)
            .into_par_iter()
            .map(|i| {
                let xi = train.features(i);
                let yi = train.label(i);
                let mut same = Vec::new();
                let mut other = Vec::new();
                for t in (0..l).filter(|&t| t != i) {
                    let d = config.spec.eval_unchecked(xi, train.features(t));
                    if train.label(t) == yi {
                        same.push(d);
                    } else {
                        other.push(d);
                    }
                }
                CacheEntry::new(yi, k_smallest(same, k), k_smallest(other, k))
            })
            .collect();
        StrangenessCache {
            k,
            spec: config.spec,
            fingerprint: fingerprint(train, config),
            entries,
        }
    }

    pub(crate) fn from_entries(train: &DataSet, config: &TcmConfig, entries: Vec<CacheEntry>) -> Self {
        StrangenessCache {
            k: config.k,
            spec: config.spec,
            fingerprint: fingerprint(train, config),
            entries,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn spec(&self) -> DistanceSpec {
        self.spec
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn entries(&self) -> &[CacheEntry] {
        &self.entries
    }

    /// Training strangeness values with no query present.
    pub fn base_alphas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.alpha_base).collect()
    }

    /// Errors unless the cache was built from exactly this data and config.
    pub fn check_matches(&self, train: &DataSet, config: &TcmConfig) -> Result<(), TcmError> {
        if self.k != config.k {
            return Err(TcmError::CacheMismatch(format!("cache k={}, requested k={}", self.k, config.k)));
        }
        if self.spec != config.spec {
            return Err(TcmError::CacheMismatch(format!(
                "cache metric {}, requested {}",
                self.spec, config.spec
            )));
        }
        let expected = fingerprint(train, config);
        if self.fingerprint != expected {
            return Err(TcmError::CacheMismatch(format!(
                "fingerprint {:016x} does not match training data ({expected:016x})",
                self.fingerprint
            )));
        }
        if self.entries.len() != train.len() {
            return Err(TcmError::CacheMismatch(format!(
                "{} cached examples, {} training examples",
                self.entries.len(),
                train.len()
            )));
        }
        Ok(())
    }
}

/// Sorted `k` smallest values of `values`.
pub(crate) fn k_smallest(mut values: Vec<f64>, k: usize) -> Vec<f64> {
    if values.len() > k {
        values.select_nth_unstable_by(k, f64::total_cmp);
        values.truncate(k);
    }
    values.sort_unstable_by(f64::total_cmp);
    values
}

/// Left-to-right sum of an ascending list, starting from `+0.0`.
pub(crate) fn ascending_sum(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |acc, &v| acc + v)
}

/// FNV-1a (64-bit) over the training data followed by `k` and the metric text.
///
/// Byte stream, all integers little-endian `u64`: example count, attribute
/// count, class count; then per example each feature's IEEE-754 bit pattern
/// and its label; then `k`; then the UTF-8 metric text.
pub fn fingerprint(train: &DataSet, config: &TcmConfig) -> u64 {
    let mut h = FnvHasher::default();
    let mut put = |v: u64| h.write(&v.to_le_bytes());
    put(train.len() as u64);
    put(train.n_attributes() as u64);
    put(train.n_classes() as u64);
    for ex in train.examples() {
        for v in &ex.features {
            put(v.to_bits());
        }
        put(ex.label.map_or(u64::MAX, |y| y as u64));
    }
    put(config.k as u64);
    h.write(config.spec.to_string().as_bytes());
    h.finish()
}

/// Renders the cache file.
///
/// ```text
/// TCMNN-CACHE v1
/// k=<k>
/// metric=<distance spec>
/// fingerprint=<16 hex digits>
/// <label>\t<same_k, comma separated>\t<other_k, comma separated>
/// ...
/// ```
pub fn serialize_cache(cache: &StrangenessCache) -> Vec<u8> {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "k={}", cache.k);
    let _ = writeln!(out, "metric={}", cache.spec);
    let _ = writeln!(out, "fingerprint={:016x}", cache.fingerprint);
    for e in &cache.entries {
        let _ = writeln!(out, "{}\t{}\t{}", e.label, join(&e.same_k), join(&e.other_k));
    }
    out.into_bytes()
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

/// Parses a cache file and checks it against the training data and config.
pub fn deserialize_cache(bytes: &[u8], train: &DataSet, config: &TcmConfig) -> Result<StrangenessCache, TcmError> {
    let malformed = |line: usize, reason: &str| TcmError::MalformedCache {
        line,
        reason: reason.to_string(),
    };
    let text = std::str::from_utf8(bytes).map_err(|_| malformed(0, "not UTF-8"))?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let mut header = |key: &str| -> Result<(usize, String), TcmError> {
        let (no, line) = lines.next().ok_or_else(|| malformed(0, "truncated header"))?;
        if key.is_empty() {
            return Ok((no, line.to_string()));
        }
        line.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .map(|v| (no, v.to_string()))
            .ok_or_else(|| malformed(no, &format!("expected {key}=")))
    };
    let (_, magic) = header("")?;
    if magic != MAGIC {
        return Err(malformed(1, "missing TCMNN-CACHE v1 header"));
    }
    let (no, k) = header("k")?;
    let k: usize = k.parse().map_err(|_| malformed(no, "bad k"))?;
    let (no, metric) = header("metric")?;
    let spec: DistanceSpec = metric.parse().map_err(|_| malformed(no, "bad metric"))?;
    let (no, fp) = header("fingerprint")?;
    let fp = u64::from_str_radix(&fp, 16).map_err(|_| malformed(no, "bad fingerprint"))?;

    let mut entries = Vec::with_capacity(train.len());
    for (no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [label, same, other] = fields[..] else {
            return Err(malformed(no, "expected label, same and other fields"));
        };
        let label: usize = label.parse().map_err(|_| malformed(no, "bad label"))?;
        let same = parse_list(same, k).ok_or_else(|| malformed(no, "bad same-class list"))?;
        let other = parse_list(other, k).ok_or_else(|| malformed(no, "bad other-class list"))?;
        entries.push(CacheEntry::new(label, same, other));
    }

    let cache = StrangenessCache {
        k,
        spec,
        fingerprint: fp,
        entries,
    };
    cache.check_matches(train, config)?;
    for (i, e) in cache.entries.iter().enumerate() {
        if e.label != train.label(i) {
            return Err(TcmError::CacheMismatch(format!("label of example {i} differs")));
        }
    }
    Ok(cache)
}

fn parse_list(field: &str, k: usize) -> Option<Vec<f64>> {
    if field.is_empty() {
        return Some(Vec::new());
    }
    let values = field
        .split(',')
        .map(|v| v.parse::<f64>().ok().filter(|d| *d >= 0.0 && !d.is_nan()))
        .collect::<Option<Vec<f64>>>()?;
    let ascending = values.windows(2).all(|w| w[0] <= w[1]);
    (ascending && values.len() <= k).then_some(values)
}
