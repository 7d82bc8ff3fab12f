//! Conjecture checks and corpus sweeps.
//!
//! The four variants at threshold `alpha = p/q`, each tested with an exact
//! optimum and cross-multiplied integers:
//!
//! | variant   | objective                    | passes when            |
//! |-----------|------------------------------|------------------------|
//! | `small`   | min `|Q|` (sink-free only)   | `q·|Q| <= (q-p)·n`     |
//! | `sources` | min `|Q|`                    | `q·|Q| <= q·n - p·s`   |
//! | `large`   | max `|N⁻[Q]|`                | `q·obj >= p·n`         |
//! | `sharp`   | max `|Q| + 2|N⁻(Q)|`         | `q·obj >= 2·p·n`       |
//!
//! A failed inequality is a result, not an error: it lands in
//! [`Report::aggregates`] with a replayable witness.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alpha::RationalAlpha;
use crate::digraph::{Digraph, VertexSet};
use crate::enumerate::{shard_range, Enumeration, Filter};
use crate::error::{Error, Result};
use crate::generators::{make, random_digraph, random_sink_free, FamilySpec};
use crate::solvers::{max_large_quasi_kernel, max_sharp_quasi_kernel, min_quasi_kernel};

/// Version of the report JSON layout.
pub const REPORT_SCHEMA: u32 = 1;
/// Largest digraph [`check`] accepts.
pub const CHECK_BUDGET: usize = 40;
const CHUNK: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Small,
    Sources,
    Large,
    Sharp,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" | "I" => Ok(Variant::Small),
            "sources" | "II" => Ok(Variant::Sources),
            "large" | "III" => Ok(Variant::Large),
            "sharp" | "IV" => Ok(Variant::Sharp),
            _ => Err(Error::InvalidArgument(format!(
                "unknown conjecture {s:?}; expected small, sources, large or sharp"
            ))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Small => "small",
            Variant::Sources => "sources",
            Variant::Large => "large",
            Variant::Sharp => "sharp",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureSpec {
    pub variant: Variant,
    pub alpha: RationalAlpha,
    /// Reject digraphs with sinks. Always set for `small`.
    pub sink_free_version: bool,
}

impl ConjectureSpec {
    pub fn new(variant: Variant, alpha: RationalAlpha, sink_free_version: bool) -> Result<Self> {
        if variant == Variant::Small && !sink_free_version {
            return Err(Error::InvalidArgument(
                "the small variant is only stated for sink-free digraphs".into(),
            ));
        }
        Ok(ConjectureSpec {
            variant,
            alpha,
            sink_free_version,
        })
    }

    /// `small` gets the sink-free version, the others the general one.
    pub fn standard(variant: Variant, alpha: RationalAlpha) -> Self {
        ConjectureSpec {
            variant,
            alpha,
            sink_free_version: variant == Variant::Small,
        }
    }

    /// Whether smaller objectives are better.
    pub fn minimizes(&self) -> bool {
        matches!(self.variant, Variant::Small | Variant::Sources)
    }
}

/// Exact rationals travel as `"num/den"` strings.
mod ratio_str {
    use num_rational::Ratio;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<i64>, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
    }

    pub fn parse(s: &str) -> Option<Ratio<i64>> {
        let (a, b) = s.split_once('/')?;
        let (a, b) = (a.parse().ok()?, b.parse::<i64>().ok()?);
        (b != 0).then(|| Ratio::new(a, b))
    }

    pub mod opt {
        use super::*;
        pub fn serialize<S: Serializer>(r: &Option<Ratio<i64>>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => super::serialize(r, s),
                None => s.serialize_none(),
            }
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Ratio<i64>>, D::Error> {
            match Option::<String>::deserialize(d)? {
                None => Ok(None),
                Some(s) => parse(&s)
                    .map(Some)
                    .ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))),
            }
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    /// Position in the corpus.
    pub index: u64,
    pub n: usize,
    /// [`Digraph::adjacency_hex`].
    pub adjacency: String,
    pub arcs: Vec<[usize; 2]>,
    pub objective: usize,
    /// The conjectured bound, in the objective's units.
    #[serde(with = "ratio_str")]
    pub bound: Ratio<i64>,
    /// Distance to the bound over `n`, signed so that negative means failure.
    #[serde(with = "ratio_str")]
    pub normalized_slack: Ratio<i64>,
    pub pass: bool,
    pub witness: VertexSet,
}

impl Record {
    pub fn digraph(&self) -> Result<Digraph> {
        Digraph::from_arcs(self.n, self.arcs.iter().map(|a| (a[0], a[1])))
    }
}

/// Evaluates one variant on one digraph.
pub fn check(d: &Digraph, spec: &ConjectureSpec) -> Result<Record> {
    if d.n() > CHECK_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "conjecture check on {} vertices (limit {CHECK_BUDGET})",
            d.n()
        )));
    }
    if spec.sink_free_version {
        if let Some(v) = d.sinks().first() {
            return Err(Error::NotSinkFree(v));
        }
    }
    let (p, q) = (spec.alpha.p() as u128, spec.alpha.q() as u128);
    let n = d.n() as u128;
    let s = d.sources_not_sinks().len() as u128;
    let r = match spec.variant {
        Variant::Small | Variant::Sources => min_quasi_kernel(d),
        Variant::Large => max_large_quasi_kernel(d),
        Variant::Sharp => max_sharp_quasi_kernel(d),
    };
    let witness = r.witness.expect("every digraph has a quasi-kernel");
    if !r.verified {
        return Err(Error::post("check", format!("solver witness {witness} failed re-check")));
    }
    let obj = r.objective as u128;
    // bound numerator over q
    let (pass, bound_num) = match spec.variant {
        Variant::Small => (q * obj <= (q - p) * n, (q - p) * n),
        Variant::Sources => (q * obj + p * s <= q * n, q * n - p * s),
        Variant::Large => (q * obj >= p * n, p * n),
        Variant::Sharp => (q * obj >= 2 * p * n, 2 * p * n),
    };
    let bound = Ratio::new(bound_num as i64, q as i64);
    let diff = if spec.minimizes() {
        bound - Ratio::from_integer(r.objective as i64)
    } else {
        Ratio::from_integer(r.objective as i64) - bound
    };
    let normalized_slack = if d.n() == 0 { diff } else { diff / d.n() as i64 };
    debug_assert_eq!(pass, normalized_slack >= Ratio::from_integer(0));
    Ok(Record {
        index: 0,
        n: d.n(),
        adjacency: d.adjacency_hex(),
        arcs: d.arcs().map(|(u, v)| [u, v]).collect(),
        objective: r.objective,
        bound,
        normalized_slack,
        pass,
        witness,
    })
}

/// What a sweep runs over. Every corpus is indexed `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Corpus {
    /// All labeled digraphs on `n` vertices, or one per isomorphism class.
    Enumeration { n: usize, sink_free: bool, canonical: bool },
    Families { specs: Vec<FamilySpec> },
    /// Digraph `i` is drawn from stream `i` of `seed`.
    Random {
        n: usize,
        p: (u64, u64),
        count: u64,
        seed: u64,
        sink_free: bool,
    },
}

impl fmt::Display for Corpus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Corpus::Enumeration { n, sink_free, canonical } => write!(
                f,
                "{} n={n}{}",
                if *canonical { "canonical" } else { "labeled" },
                if *sink_free { " sink-free" } else { "" }
            ),
            Corpus::Families { specs } => {
                let s: Vec<String> = specs.iter().map(|s| s.to_string()).collect();
                write!(f, "families {}", s.join(" "))
            }
            Corpus::Random { n, p, count, seed, sink_free } => write!(
                f,
                "random n={n} p={}/{} count={count} seed={seed}{}",
                p.0,
                p.1,
                if *sink_free { " sink-free" } else { "" }
            ),
        }
    }
}

enum Source<'a> {
    Enumeration(Enumeration),
    Families(&'a [FamilySpec]),
    Random {
        n: usize,
        p: Ratio<u64>,
        count: u64,
        seed: u64,
        sink_free: bool,
    },
}

impl Source<'_> {
    fn len(&self) -> u64 {
        match self {
            Source::Enumeration(e) => e.total(),
            Source::Families(s) => s.len() as u64,
            Source::Random { count, .. } => *count,
        }
    }

    /// `None` for indices the enumeration filter skips.
    fn get(&self, i: u64) -> Result<Option<Digraph>> {
        if i >= self.len() {
            return Err(Error::InvalidArgument(format!("index {i} outside corpus")));
        }
        match self {
            Source::Enumeration(e) => Ok(e.get(i)),
            Source::Families(s) => make(&s[i as usize]).map(Some),
            &Source::Random { n, p, seed, sink_free, .. } => if sink_free {
                random_sink_free(n, p, seed, i)
            } else {
                random_digraph(n, p, seed, i)
            }
            .map(Some),
        }
    }
}

impl Corpus {
    fn source(&self) -> Result<Source<'_>> {
        Ok(match self {
            Corpus::Enumeration { n, sink_free, canonical } => {
                let filter = if *sink_free { Filter::SinkFree } else { Filter::All };
                Source::Enumeration(Enumeration::new(*n, filter, *canonical)?)
            }
            Corpus::Families { specs } => Source::Families(specs),
            Corpus::Random { n, p, count, seed, sink_free } => {
                if p.1 == 0 || p.0 > p.1 {
                    return Err(Error::InvalidArgument(format!(
                        "probability {}/{} outside [0, 1]",
                        p.0, p.1
                    )));
                }
                Source::Random {
                    n: *n,
                    p: Ratio::new(p.0, p.1),
                    count: *count,
                    seed: *seed,
                    sink_free: *sink_free,
                }
            }
        })
    }

    /// Size of the index space. Sink-free enumerations skip indices, so
    /// this can exceed the number of digraphs checked.
    pub fn len(&self) -> Result<u64> {
        Ok(self.source()?.len())
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.len()? == 0)
    }

    pub fn get(&self, index: u64) -> Result<Option<Digraph>> {
        self.source()?.get(index)
    }
}

/// Which records a report keeps. Aggregates always cover every digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Keep {
    All,
    /// Only failures; the extremal record stays in the aggregates.
    Failures,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregates {
    pub count: u64,
    /// Indices of every failed record, ascending.
    pub failures: Vec<u64>,
    /// Record with the smallest normalized slack, first index on ties.
    pub extremal: Option<Record>,
    #[serde(with = "ratio_str::opt")]
    pub min_normalized_slack: Option<Ratio<i64>>,
}

impl Aggregates {
    fn empty() -> Self {
        Aggregates {
            count: 0,
            failures: Vec::new(),
            extremal: None,
            min_normalized_slack: None,
        }
    }

    fn merge(mut self, other: Aggregates) -> Self {
        self.count += other.count;
        self.failures.extend(other.failures);
        self.failures.sort_unstable();
        self.failures.dedup();
        self.extremal = match (self.extremal, other.extremal) {
            (Some(a), Some(b)) => Some(
                if (b.normalized_slack, b.index) < (a.normalized_slack, a.index) {
                    b
                } else {
                    a
                },
            ),
            (a, b) => a.or(b),
        };
        self.min_normalized_slack = self.extremal.as_ref().map(|r| r.normalized_slack);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub version: String,
    pub corpus: Corpus,
    pub conjecture: ConjectureSpec,
    pub keep: Keep,
    /// Shard ids `(index, count)` merged into this report, ascending.
    pub shards: Vec<(usize, usize)>,
    /// Sorted by index.
    pub records: Vec<Record>,
    pub aggregates: Aggregates,
}

impl Report {
    fn from_records(
        corpus: &Corpus,
        spec: &ConjectureSpec,
        keep: Keep,
        records: Vec<Record>,
    ) -> Report {
        let mut aggregates = Aggregates::empty();
        let mut kept = Vec::new();
        for r in records {
            let single = Aggregates {
                count: 1,
                failures: if r.pass { vec![] } else { vec![r.index] },
                extremal: Some(r.clone()),
                min_normalized_slack: Some(r.normalized_slack),
            };
            aggregates = aggregates.merge(single);
            if keep == Keep::All || !r.pass {
                kept.push(r);
            }
        }
        Report {
            schema: REPORT_SCHEMA,
            version: env!("CARGO_PKG_VERSION").to_string(),
            corpus: corpus.clone(),
            conjecture: *spec,
            keep,
            shards: Vec::new(),
            records: kept,
            aggregates,
        }
    }

    /// Combines two reports over the same corpus and conjecture. Merging
    /// is associative and commutative.
    pub fn merge(mut self, other: Report) -> Result<Report> {
        if self.corpus != other.corpus || self.conjecture != other.conjecture {
            return Err(Error::InvalidArgument(
                "cannot merge reports over different corpora or conjectures".into(),
            ));
        }
        self.keep = if self.keep == Keep::All && other.keep == Keep::All {
            Keep::All
        } else {
            Keep::Failures
        };
        self.shards.extend(other.shards);
        self.shards.sort_unstable();
        self.shards.dedup();
        self.records.extend(other.records);
        self.records.sort_by_key(|r| r.index);
        self.records.dedup_by_key(|r| r.index);
        if self.keep == Keep::Failures {
            self.records.retain(|r| !r.pass);
        }
        self.aggregates = self.aggregates.merge(other.aggregates);
        Ok(self)
    }

    pub fn failures(&self) -> &[u64] {
        &self.aggregates.failures
    }

    /// 0 when every digraph passed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.aggregates.failures.is_empty() {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> Result<Report> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("bad report: {e}")))
    }

    /// One row per kept record.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,adjacency,n,objective,bound_num,bound_den,pass\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.index,
                r.adjacency,
                r.n,
                r.objective,
                r.bound.numer(),
                r.bound.denom(),
                r.pass
            ));
        }
        out
    }

    /// Short human summary.
    pub fn summary(&self) -> String {
        let a = &self.aggregates;
        let mut s = format!(
            "corpus: {}\nconjecture: {} alpha={}{}\ndigraphs: {}\nfailures: {}\n",
            self.corpus,
            self.conjecture.variant,
            self.conjecture.alpha,
            if self.conjecture.sink_free_version { " (sink-free)" } else { "" },
            a.count,
            a.failures.len()
        );
        if let (Some(slack), Some(r)) = (a.min_normalized_slack, &a.extremal) {
            s.push_str(&format!(
                "min normalized slack: {}/{} at index {}\n",
                slack.numer(),
                slack.denom(),
                r.index
            ));
        }
        for i in a.failures.iter().take(10) {
            s.push_str(&format!("failed: index {i}\n"));
        }
        s
    }
}

fn run_range(
    corpus: &Corpus,
    spec: &ConjectureSpec,
    keep: Keep,
    range: Range<u64>,
) -> Result<Report> {
    let source = corpus.source()?;
    let chunks: Vec<Range<u64>> = (range.start..range.end)
        .step_by(CHUNK as usize)
        .map(|s| s..(s + CHUNK).min(range.end))
        .collect();
    let empty = Report::from_records(corpus, spec, keep, Vec::new());
    chunks
        .into_par_iter()
        .map(|r| {
            let mut records = Vec::new();
            for i in r {
                if let Some(d) = source.get(i)? {
                    let mut rec = check(&d, spec)?;
                    rec.index = i;
                    records.push(rec);
                }
            }
            Ok(Report::from_records(corpus, spec, keep, records))
        })
        .try_reduce(|| empty.clone(), |a, b| a.merge(b))
}

/// Checks every digraph of shard `shard.0` out of `shard.1` contiguous
/// index ranges.
pub fn sweep(
    corpus: &Corpus,
    spec: &ConjectureSpec,
    shard: (usize, usize),
    keep: Keep,
) -> Result<Report> {
    let total = corpus.len()?;
    let range = shard_range(total, shard.1 as u64, shard.0 as u64)?;
    let mut report = run_range(corpus, spec, keep, range)?;
    report.shards = vec![shard];
    Ok(report)
}

/// Every digraph of the corpus attaining the minimum normalized slack.
pub fn extremal(corpus: &Corpus, spec: &ConjectureSpec) -> Result<Report> {
    let mut report = sweep(corpus, spec, (0, 1), Keep::All)?;
    let min = report.aggregates.min_normalized_slack;
    report.records.retain(|r| Some(r.normalized_slack) == min);
    Ok(report)
}
