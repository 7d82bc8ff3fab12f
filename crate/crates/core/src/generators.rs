//! Named digraph families and seeded random digraphs.
//!
//! Random digraphs come from ChaCha8 keyed by the seed; stream `i` of the
//! same seed drives the `i`-th digraph of a corpus, so corpora can be split
//! across workers without changing their content. Arc probabilities are
//! exact fractions: pair `(u, v)` is drawn as `uniform(0..den) < num`, in
//! row-major order of ordered pairs.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::reductions::c3_blowup;

/// Attempts before [`random_sink_free`] gives up.
pub const SINK_FREE_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum FamilySpec {
    Cycle { n: usize },
    Path { n: usize },
    Edgeless { n: usize },
    /// Odd `n >= 3`, arcs `i -> i + j` for `j = 1..=(n-1)/2`.
    CirculantTournament { n: usize },
    /// `k`-fold triangle blowup of a single vertex.
    C3Power { k: usize },
    Union { parts: Vec<FamilySpec> },
    Random { n: usize, p: (u64, u64), seed: u64 },
    RandomTournament { n: usize, seed: u64 },
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn check_probability(p: Ratio<u64>) -> Result<()> {
    if *p.denom() == 0 || p > Ratio::from_integer(1) {
        return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

fn draw(d: &mut Digraph, p: Ratio<u64>, r: &mut ChaCha8Rng) {
    let (num, den) = (*p.numer(), *p.denom());
    for u in 0..d.n() {
        for v in 0..d.n() {
            if u != v && r.gen_range(0..den) < num {
                d.set_arc(u, v);
            }
        }
    }
}

/// Each ordered pair independently with probability `p`, from stream
/// `stream` of `seed`.
pub fn random_digraph(n: usize, p: Ratio<u64>, seed: u64, stream: u64) -> Result<Digraph> {
    check_probability(p)?;
    let mut d = Digraph::edgeless(n)?;
    draw(&mut d, p, &mut rng(seed, stream));
    Ok(d)
}

/// Rejection sampling of [`random_digraph`] until no vertex is a sink; all
/// attempts share one stream.
pub fn random_sink_free(n: usize, p: Ratio<u64>, seed: u64, stream: u64) -> Result<Digraph> {
    check_probability(p)?;
    if n == 1 || (n > 1 && *p.numer() == 0) {
        return Err(Error::InvalidArgument(format!(
            "no sink-free digraph with n = {n}, p = {p}"
        )));
    }
    let mut r = rng(seed, stream);
    for _ in 0..SINK_FREE_ATTEMPTS {
        let mut d = Digraph::edgeless(n)?;
        draw(&mut d, p, &mut r);
        if d.is_sink_free() {
            return Ok(d);
        }
    }
    Err(Error::BudgetExceeded(format!(
        "no sink-free digraph after {SINK_FREE_ATTEMPTS} attempts"
    )))
}

/// Each unordered pair oriented by a fair coin.
pub fn random_tournament(n: usize, seed: u64, stream: u64) -> Result<Digraph> {
    let mut d = Digraph::edgeless(n)?;
    let mut r = rng(seed, stream);
    for u in 0..n {
        for v in u + 1..n {
            if r.gen::<bool>() {
                d.set_arc(u, v);
            } else {
                d.set_arc(v, u);
            }
        }
    }
    Ok(d)
}

pub fn cycle(n: usize) -> Result<Digraph> {
    if n == 1 {
        return Err(Error::InvalidArgument("a cycle needs at least 2 vertices".into()));
    }
    Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn path(n: usize) -> Result<Digraph> {
    Digraph::from_arcs(n, (1..n).map(|i| (i - 1, i)))
}

pub fn circulant_tournament(n: usize) -> Result<Digraph> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "circulant tournament needs odd n >= 3, got {n}"
        )));
    }
    Digraph::from_arcs(
        n,
        (0..n).flat_map(|i| (1..=(n - 1) / 2).map(move |j| (i, (i + j) % n))),
    )
}

pub fn c3_power(k: usize) -> Result<Digraph> {
    let mut d = Digraph::edgeless(1)?;
    for _ in 0..k {
        d = c3_blowup(&d)?.0;
    }
    Ok(d)
}

pub fn make(spec: &FamilySpec) -> Result<Digraph> {
    match spec {
        FamilySpec::Cycle { n } => cycle(*n),
        FamilySpec::Path { n } => path(*n),
        FamilySpec::Edgeless { n } => Digraph::edgeless(*n),
        FamilySpec::CirculantTournament { n } => circulant_tournament(*n),
        FamilySpec::C3Power { k } => c3_power(*k),
        FamilySpec::Union { parts } => union_family(parts),
        FamilySpec::Random { n, p, seed } => {
            if p.1 == 0 {
                return Err(Error::InvalidArgument("probability denominator is zero".into()));
            }
            random_digraph(*n, Ratio::new(p.0, p.1), *seed, 0)
        }
        FamilySpec::RandomTournament { n, seed } => random_tournament(*n, *seed, 0),
    }
}

pub fn union_family(specs: &[FamilySpec]) -> Result<Digraph> {
    specs
        .iter()
        .try_fold(Digraph::null(), |acc, s| acc.disjoint_union(&make(s)?))
}

fn bad(s: &str) -> Error {
    Error::InvalidArgument(format!(
        "bad family {s:?}; expected cycle:N, path:N, edgeless:N, circulant:N, c3pow:K, \
         union:SPEC,SPEC,..., random:N:P/Q:SEED or tournament:N:SEED"
    ))
}

/// Parses `cycle:4`, `circulant:7`, `c3pow:2`, `union:cycle:2,cycle:4`,
/// `random:6:1/3:42`, `tournament:5:7`, `path:3`, `edgeless:3`.
impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad(s))?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad(s));
        let seed = |t: &str| t.trim().parse::<u64>().map_err(|_| bad(s));
        Ok(match kind {
            "cycle" => FamilySpec::Cycle { n: num(rest)? },
            "path" => FamilySpec::Path { n: num(rest)? },
            "edgeless" => FamilySpec::Edgeless { n: num(rest)? },
            "circulant" => FamilySpec::CirculantTournament { n: num(rest)? },
            "c3pow" => FamilySpec::C3Power { k: num(rest)? },
            "union" => FamilySpec::Union {
                parts: rest
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?,
            },
            "random" => {
                let f: Vec<&str> = rest.split(':').collect();
                if f.len() != 3 {
                    return Err(bad(s));
                }
                let (a, b) = f[1].split_once('/').ok_or_else(|| bad(s))?;
                let p = (seed(a)?, seed(b)?);
                if p.1 == 0 || p.0 > p.1 {
                    return Err(bad(s));
                }
                FamilySpec::Random {
                    n: num(f[0])?,
                    p,
                    seed: seed(f[2])?,
                }
            }
            "tournament" => {
                let (n, sd) = rest.split_once(':').ok_or_else(|| bad(s))?;
                FamilySpec::RandomTournament {
                    n: num(n)?,
                    seed: seed(sd)?,
                }
            }
            _ => return Err(bad(s)),
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cycle { n } => write!(f, "cycle:{n}"),
            FamilySpec::Path { n } => write!(f, "path:{n}"),
            FamilySpec::Edgeless { n } => write!(f, "edgeless:{n}"),
            FamilySpec::CirculantTournament { n } => write!(f, "circulant:{n}"),
            FamilySpec::C3Power { k } => write!(f, "c3pow:{k}"),
            FamilySpec::Union { parts } => {
                let parts: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "union:{}", parts.join(","))
            }
            FamilySpec::Random { n, p, seed } => write!(f, "random:{n}:{}/{}:{seed}", p.0, p.1),
            FamilySpec::RandomTournament { n, seed } => write!(f, "tournament:{n}:{seed}"),
        }
    }
}
