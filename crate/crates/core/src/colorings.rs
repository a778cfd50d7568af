//! Finite r-colorings of `{0, …, bound−1}` with 1-based colors.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of the PRNG recorded in random-coloring provenance strings.
pub const RNG_ID: &str = "chacha8";

/// Default cap on `r^bound` for [`enumerate_all`].
pub const ENUMERATION_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ColoringDoc")]
pub struct Coloring {
    r: u32,
    bound: u64,
    colors: Vec<u32>,
    provenance: String,
}

#[derive(Deserialize)]
struct ColoringDoc {
    r: u32,
    bound: u64,
    colors: Vec<u32>,
    provenance: String,
}

impl TryFrom<ColoringDoc> for Coloring {
    type Error = Error;

    fn try_from(doc: ColoringDoc) -> Result<Self> {
        Coloring::from_assignment(doc.r, doc.colors, doc.provenance).and_then(|c| {
            if c.bound != doc.bound {
                Err(Error::Schema(format!(
                    "bound {} but {} colors given",
                    doc.bound, c.bound
                )))
            } else {
                Ok(c)
            }
        })
    }
}

impl Coloring {
    /// Build from an explicit assignment; `colors[n]` is the color of `n`.
    pub fn from_assignment(
        r: u32,
        colors: Vec<u32>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if r == 0 {
            return Err(Error::Schema("r must be at least 1".into()));
        }
        if colors.is_empty() {
            return Err(Error::Schema("bound must be at least 1".into()));
        }
        if let Some((n, &c)) = colors.iter().enumerate().find(|(_, &c)| c == 0 || c > r) {
            return Err(Error::Schema(format!(
                "color {c} at {n} is outside 1..={r}"
            )));
        }
        Ok(Coloring {
            r,
            bound: colors.len() as u64,
            colors,
            provenance: provenance.into(),
        })
    }

    /// Every value gets color 1.
    pub fn constant(bound: u64) -> Result<Self> {
        let len = checked_len(bound)?;
        Coloring::from_assignment(1, vec![1; len], format!("constant:bound={bound}"))
    }

    /// Uniform random colors from a seeded ChaCha8 stream.
    pub fn random(seed: u64, r: u32, bound: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::Schema("r must be at least 1".into()));
        }
        let len = checked_len(bound)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let colors = (0..len).map(|_| rng.random_range(1..=r)).collect();
        Coloring::from_assignment(
            r,
            colors,
            format!("random:seed={seed},r={r},bound={bound},rng={RNG_ID}"),
        )
    }

    /// `color(n) = map[n mod q]` with `q = map.len()`.
    pub fn periodic(map: &[u32], r: u32, bound: u64) -> Result<Self> {
        if map.is_empty() {
            return Err(Error::Schema("periodic map must be nonempty".into()));
        }
        let len = checked_len(bound)?;
        let q = map.len();
        let colors = (0..len).map(|n| map[n % q]).collect();
        let map_str: Vec<String> = map.iter().map(u32::to_string).collect();
        Coloring::from_assignment(
            r,
            colors,
            format!(
                "periodic:q={q},r={r},map={},bound={bound}",
                map_str.join("/")
            ),
        )
    }

    /// Periodic coloring with the default map `i ↦ (i mod r) + 1`.
    pub fn periodic_mod(q: u32, r: u32, bound: u64) -> Result<Self> {
        if q == 0 || r == 0 {
            return Err(Error::Schema("q and r must be at least 1".into()));
        }
        let map: Vec<u32> = (0..q).map(|i| i % r + 1).collect();
        Coloring::periodic(&map, r, bound)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn color_of(&self, n: u64) -> Result<u32> {
        self.get(n).ok_or(Error::OutOfDomain {
            value: n,
            bound: self.bound,
        })
    }

    #[inline]
    pub fn get(&self, n: u64) -> Option<u32> {
        usize::try_from(n)
            .ok()
            .and_then(|i| self.colors.get(i).copied())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("coloring serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Coloring::from_json(&text)
    }
}

fn checked_len(bound: u64) -> Result<usize> {
    if bound == 0 {
        return Err(Error::Schema("bound must be at least 1".into()));
    }
    usize::try_from(bound).map_err(|_| Error::InvalidParameter(format!("bound {bound} too large")))
}

/// Where a coloring comes from, as written on the command line:
/// `random:seed=S,r=R`, `periodic:q=Q,r=R` or `file:PATH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringSource {
    Random { seed: u64, r: u32 },
    Periodic { q: u32, r: u32 },
    File(String),
}

impl ColoringSource {
    /// Materialize on `{0, …, bound−1}`. File colorings carry their own bound.
    pub fn realize(&self, bound: u64) -> Result<Coloring> {
        match self {
            ColoringSource::Random { seed, r } => Coloring::random(*seed, *r, bound),
            ColoringSource::Periodic { q, r } => Coloring::periodic_mod(*q, *r, bound),
            ColoringSource::File(path) => Coloring::from_file(path),
        }
    }
}

impl FromStr for ColoringSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidParameter(format!("coloring {s:?}: {why}"));
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("expected KIND:ARGS"))?;
        if kind == "file" {
            return Ok(ColoringSource::File(rest.to_string()));
        }
        let mut seed = None;
        let mut q = None;
        let mut r = None;
        for kv in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| bad("expected key=value"))?;
            let num: u64 = v.parse().map_err(|_| bad("non-numeric value"))?;
            match k {
                "seed" => seed = Some(num),
                "q" => q = Some(u32::try_from(num).map_err(|_| bad("q too large"))?),
                "r" => r = Some(u32::try_from(num).map_err(|_| bad("r too large"))?),
                _ => return Err(bad(&format!("unknown key {k}"))),
            }
        }
        let r = r.ok_or_else(|| bad("missing r"))?;
        match kind {
            "random" => Ok(ColoringSource::Random {
                seed: seed.unwrap_or(0),
                r,
            }),
            "periodic" => Ok(ColoringSource::Periodic {
                q: q.ok_or_else(|| bad("missing q"))?,
                r,
            }),
            _ => Err(bad("unknown kind")),
        }
    }
}

impl fmt::Display for ColoringSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringSource::Random { seed, r } => write!(f, "random:seed={seed},r={r}"),
            ColoringSource::Periodic { q, r } => write!(f, "periodic:q={q},r={r}"),
            ColoringSource::File(p) => write!(f, "file:{p}"),
        }
    }
}

/// Every r-coloring of `{0, …, bound−1}`, in lexicographic order of the
/// assignment word (position 0 most significant).
pub fn enumerate_all(r: u32, bound: u64) -> Result<AllColorings> {
    enumerate_all_capped(r, bound, ENUMERATION_CAP)
}

pub fn enumerate_all_capped(r: u32, bound: u64, cap: u64) -> Result<AllColorings> {
    if r == 0 || bound == 0 {
        return Err(Error::Schema("r and bound must be at least 1".into()));
    }
    let total = u32::try_from(bound)
        .ok()
        .and_then(|b| (r as u64).checked_pow(b))
        .filter(|&t| t <= cap)
        .ok_or(Error::CapExceeded { r, bound, cap })?;
    Ok(AllColorings {
        r,
        word: vec![1; bound as usize],
        remaining: total,
        index: 0,
    })
}

/// Iterator returned by [`enumerate_all`].
pub struct AllColorings {
    r: u32,
    word: Vec<u32>,
    remaining: u64,
    index: u64,
}

impl AllColorings {
    pub fn total(&self) -> u64 {
        self.remaining + self.index
    }
}

impl Iterator for AllColorings {
    type Item = Coloring;

    fn next(&mut self) -> Option<Coloring> {
        if self.remaining == 0 {
            return None;
        }
        let out = Coloring {
            r: self.r,
            bound: self.word.len() as u64,
            colors: self.word.clone(),
            provenance: format!(
                "enumeration:r={},bound={},index={}",
                self.r,
                self.word.len(),
                self.index
            ),
        };
        self.remaining -= 1;
        self.index += 1;
        for c in self.word.iter_mut().rev() {
            if *c < self.r {
                *c += 1;
                break;
            }
            *c = 1;
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}
