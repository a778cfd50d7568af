//! Located words over `{0, …, q−1}` and the Hales–Jewett variant search.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::colorings::{enumerate_all_capped, Coloring};
use crate::error::{Error, Result};
use crate::ground::GroundTable;
use crate::semigroup::{eval_monomial, Monomial};

/// Largest window the bitmask searches accept.
pub const MAX_WINDOW: u64 = 32;

/// A finitely supported map from positions `>= 1` to letters `< q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "WordDoc", try_from = "WordDoc")]
pub struct LocatedWord {
    q: u32,
    letters: BTreeMap<u64, u32>,
}

#[derive(Serialize, Deserialize)]
struct WordDoc {
    q: u32,
    letters: Vec<(u64, u32)>,
}

impl From<LocatedWord> for WordDoc {
    fn from(w: LocatedWord) -> Self {
        WordDoc {
            q: w.q,
            letters: w.letters.into_iter().collect(),
        }
    }
}

impl TryFrom<WordDoc> for LocatedWord {
    type Error = Error;

    fn try_from(doc: WordDoc) -> Result<Self> {
        LocatedWord::new(doc.q, doc.letters)
    }
}

fn check_alphabet(q: u32) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidParameter(
            "alphabet size must be at least 1".into(),
        ));
    }
    Ok(())
}

fn check_position(pos: u64) -> Result<()> {
    if pos == 0 {
        return Err(Error::InvalidParameter("word positions start at 1".into()));
    }
    Ok(())
}

impl LocatedWord {
    pub fn empty(q: u32) -> Result<Self> {
        check_alphabet(q)?;
        Ok(LocatedWord {
            q,
            letters: BTreeMap::new(),
        })
    }

    pub fn new(q: u32, pairs: impl IntoIterator<Item = (u64, u32)>) -> Result<Self> {
        let mut w = LocatedWord::empty(q)?;
        for (pos, letter) in pairs {
            check_position(pos)?;
            if letter >= q {
                return Err(Error::LetterOutOfAlphabet { letter, q });
            }
            if w.letters.insert(pos, letter).is_some() {
                return Err(Error::DomainOverlap(pos));
            }
        }
        Ok(w)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn letters(&self) -> &BTreeMap<u64, u32> {
        &self.letters
    }

    pub fn domain(&self) -> impl Iterator<Item = u64> + '_ {
        self.letters.keys().copied()
    }

    pub fn get(&self, pos: u64) -> Option<u32> {
        self.letters.get(&pos).copied()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Union of two words with disjoint domains.
    pub fn concat(&self, other: &LocatedWord) -> Result<LocatedWord> {
        if self.q != other.q {
            return Err(Error::InvalidParameter(format!(
                "alphabet sizes differ: {} and {}",
                self.q, other.q
            )));
        }
        let mut letters = self.letters.clone();
        for (&pos, &letter) in &other.letters {
            if letters.insert(pos, letter).is_some() {
                return Err(Error::DomainOverlap(pos));
            }
        }
        Ok(LocatedWord { q: self.q, letters })
    }

    /// The monomial `∏ s_t^{w(t)}` over the domain.
    pub fn monomial(&self) -> Monomial {
        Monomial::from_factors(self.letters.iter().map(|(&t, &l)| (t, l as u64)))
    }
}

/// `h(w) = ∏_{t ∈ Dom(w)} t^{w(t)}` evaluated in `(ℕ₀, *_f)`; the empty word maps to 1.
pub fn h_project(w: &LocatedWord, table: &GroundTable) -> Result<u64> {
    eval_monomial(table, &w.monomial())
}

/// A located word whose letters may also be the variable `v`, which occurs at least once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocatedVariableWord {
    q: u32,
    /// `None` marks the variable.
    letters: BTreeMap<u64, Option<u32>>,
}

impl LocatedVariableWord {
    pub fn new(q: u32, pairs: impl IntoIterator<Item = (u64, Option<u32>)>) -> Result<Self> {
        check_alphabet(q)?;
        let mut letters = BTreeMap::new();
        for (pos, letter) in pairs {
            check_position(pos)?;
            if let Some(l) = letter.filter(|&l| l >= q) {
                return Err(Error::LetterOutOfAlphabet { letter: l, q });
            }
            if letters.insert(pos, letter).is_some() {
                return Err(Error::DomainOverlap(pos));
            }
        }
        if !letters.values().any(Option::is_none) {
            return Err(Error::InvalidParameter(
                "variable word needs at least one variable position".into(),
            ));
        }
        Ok(LocatedVariableWord { q, letters })
    }

    /// `α ∪ γ × {v}`.
    pub fn from_parts(alpha: &LocatedWord, gamma: &[u64]) -> Result<Self> {
        let fixed = alpha.letters.iter().map(|(&p, &l)| (p, Some(l)));
        LocatedVariableWord::new(alpha.q, fixed.chain(gamma.iter().map(|&p| (p, None))))
    }

    pub fn variable_positions(&self) -> impl Iterator<Item = u64> + '_ {
        self.letters
            .iter()
            .filter(|(_, l)| l.is_none())
            .map(|(&p, _)| p)
    }

    pub fn domain(&self) -> impl Iterator<Item = u64> + '_ {
        self.letters.keys().copied()
    }

    /// Replace every variable position by `s`.
    pub fn substitute(&self, s: u32) -> Result<LocatedWord> {
        if s >= self.q {
            return Err(Error::LetterOutOfAlphabet {
                letter: s,
                q: self.q,
            });
        }
        Ok(LocatedWord {
            q: self.q,
            letters: self
                .letters
                .iter()
                .map(|(&p, l)| (p, l.unwrap_or(s)))
                .collect(),
        })
    }
}

/// A monochromatic instance found by [`hj_search`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HjInstance {
    pub alpha: LocatedWord,
    pub gamma: Vec<u64>,
    /// The progression `F`, when searching with an AP family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ap: Option<Vec<u64>>,
    pub color: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HjOutcome {
    Found {
        instance: HjInstance,
        candidates: u64,
    },
    Exhausted {
        candidates: u64,
    },
}

impl HjOutcome {
    pub fn instance(&self) -> Option<&HjInstance> {
        match self {
            HjOutcome::Found { instance, .. } => Some(instance),
            HjOutcome::Exhausted { .. } => None,
        }
    }
}

fn positions(mask: u64) -> Vec<u64> {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

/// Calls `f` on every letter tuple in `{0..q}^len`, lexicographically, until it returns `true`.
fn any_letter_tuple(len: usize, q: u32, mut f: impl FnMut(&[u32]) -> bool) -> bool {
    let mut t = vec![0u32; len];
    loop {
        if f(&t) {
            return true;
        }
        let Some(pos) = t.iter().rposition(|&l| l + 1 < q) else {
            return false;
        };
        t[pos] += 1;
        t[pos + 1..].iter_mut().for_each(|l| *l = 0);
    }
}

fn check_window(n: u64) -> Result<()> {
    if n == 0 || n > MAX_WINDOW {
        return Err(Error::InvalidParameter(format!(
            "window must be in 1..={MAX_WINDOW}"
        )));
    }
    Ok(())
}

/// Search the window `{1, …, n}` for `α`, `γ` (and with `ap_k`, a
/// `(k+1)`-term progression `F`) whose instantiations all get one color.
///
/// Order: `γ` by bitmask, then `Dom(α)` by bitmask over the remaining
/// positions, then the letters of `α` lexicographically, then `F` by
/// start and step. A word the coloring rejects (`None`) disqualifies the
/// candidate.
pub fn hj_search(
    q: u32,
    n: u64,
    ap_k: Option<u64>,
    coloring: impl Fn(&LocatedWord) -> Option<u32>,
) -> Result<HjOutcome> {
    check_alphabet(q)?;
    check_window(n)?;
    if ap_k == Some(0) {
        return Err(Error::InvalidParameter("ap_k must be at least 1".into()));
    }
    let full = (1u64 << n) - 1;
    let aps: Vec<(u64, Vec<u64>)> = match ap_k {
        None => Vec::new(),
        Some(k) => {
            let mut out = Vec::new();
            for a in 1..=n {
                for d in 1..=n {
                    if a + k * d > n {
                        break;
                    }
                    let terms: Vec<u64> = (0..=k).map(|i| a + i * d).collect();
                    let mask = terms.iter().fold(0, |m, &t| m | 1 << (t - 1));
                    out.push((mask, terms));
                }
            }
            out
        }
    };
    let mut candidates = 0u64;
    let mut word = BTreeMap::new();
    for gamma in 1..=full {
        let rest = full & !gamma;
        let gamma_pos = positions(gamma);
        // Subsets of `rest` in increasing numeric order.
        let mut dom = 0u64;
        loop {
            let dom_pos = positions(dom);
            let mut found = None;
            any_letter_tuple(dom_pos.len(), q, |letters| {
                word.clear();
                word.extend(dom_pos.iter().copied().zip(letters.iter().copied()));
                let alpha = LocatedWord {
                    q,
                    letters: word.clone(),
                };
                let mono = |extra: &[u64]| -> Option<u32> {
                    let mut color = None;
                    for s in 0..q {
                        let mut w = alpha.clone();
                        for &p in gamma_pos.iter().chain(extra) {
                            w.letters.insert(p, s);
                        }
                        let c = coloring(&w)?;
                        if color.is_some_and(|prev| prev != c) {
                            return None;
                        }
                        color = Some(c);
                    }
                    color
                };
                if ap_k.is_none() {
                    candidates += 1;
                    if let Some(color) = mono(&[]) {
                        found = Some(HjInstance {
                            alpha: alpha.clone(),
                            gamma: gamma_pos.clone(),
                            ap: None,
                            color,
                        });
                    }
                } else {
                    for (mask, terms) in &aps {
                        if mask & (gamma | dom) != 0 {
                            continue;
                        }
                        candidates += 1;
                        let mut color = None;
                        let ok = terms.iter().all(|&t| match mono(&[t]) {
                            Some(c) if color.is_none_or(|prev| prev == c) => {
                                color = Some(c);
                                true
                            }
                            _ => false,
                        });
                        if ok {
                            found = Some(HjInstance {
                                alpha: alpha.clone(),
                                gamma: gamma_pos.clone(),
                                ap: Some(terms.clone()),
                                color: color.expect("nonempty progression"),
                            });
                            break;
                        }
                    }
                }
                found.is_some()
            });
            if let Some(instance) = found {
                return Ok(HjOutcome::Found {
                    instance,
                    candidates,
                });
            }
            if dom == rest {
                break;
            }
            dom = (dom.wrapping_sub(rest)) & rest;
        }
    }
    Ok(HjOutcome::Exhausted { candidates })
}

/// Re-derive every word of `inst` by variable substitution and check its color.
pub fn verify_hj(
    q: u32,
    inst: &HjInstance,
    coloring: impl Fn(&LocatedWord) -> Option<u32>,
) -> Result<bool> {
    if inst.alpha.q != q || inst.gamma.is_empty() {
        return Ok(false);
    }
    let alpha_dom: Vec<u64> = inst.alpha.domain().collect();
    let disjoint = |xs: &[u64], ys: &[u64]| xs.iter().all(|x| !ys.contains(x));
    if !disjoint(&alpha_dom, &inst.gamma) {
        return Ok(false);
    }
    let lines: Vec<Vec<u64>> = match &inst.ap {
        None => vec![inst.gamma.clone()],
        Some(f) => {
            let is_ap = f.len() >= 2
                && f[1] > f[0]
                && f.windows(2)
                    .all(|w| w[1] > w[0] && w[1] - w[0] == f[1] - f[0]);
            if !is_ap || !disjoint(f, &alpha_dom) || !disjoint(f, &inst.gamma) {
                return Ok(false);
            }
            f.iter()
                .map(|&t| inst.gamma.iter().copied().chain([t]).collect())
                .collect()
        }
    };
    for line in lines {
        let vw = LocatedVariableWord::from_parts(&inst.alpha, &line)?;
        for s in 0..q {
            if coloring(&vw.substitute(s)?) != Some(inst.color) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Color words by the numeric color of their projection `h`.
pub fn projected_coloring<'a>(
    coloring: &'a Coloring,
    table: &'a GroundTable,
) -> impl Fn(&LocatedWord) -> Option<u32> + 'a {
    move |w| h_project(w, table).ok().and_then(|v| coloring.get(v))
}

/// Index of a word over `{1, …, n}` among all `(q+1)^n` such words:
/// digit `p−1` (base `q+1`) is 0 when `p` is absent, else letter + 1.
pub fn word_index(w: &LocatedWord, n: u64) -> Option<u64> {
    let base = w.q as u64 + 1;
    let mut idx = 0u64;
    let mut scale = 1u64;
    for p in 1..=n {
        if let Some(l) = w.get(p) {
            idx = idx.checked_add(scale.checked_mul(l as u64 + 1)?)?;
        }
        scale = scale.checked_mul(base)?;
    }
    (w.domain().all(|p| p <= n)).then_some(idx)
}

/// Least window `N <= max_n` such that every r-coloring of all located
/// words over `{1, …, N}` admits an instance.
pub fn hj_threshold(
    q: u32,
    r: u32,
    ap_k: Option<u64>,
    max_n: u64,
    cap: u64,
) -> Result<Option<u64>> {
    check_alphabet(q)?;
    for n in 1..=max_n {
        if every_word_coloring_has_instance(q, r, ap_k, n, cap)?.is_none() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// `None` if every r-coloring of words over `{1, …, n}` has an instance,
/// otherwise the first coloring (indexed by [`word_index`]) that has none.
pub fn every_word_coloring_has_instance(
    q: u32,
    r: u32,
    ap_k: Option<u64>,
    n: u64,
    cap: u64,
) -> Result<Option<Coloring>> {
    check_window(n)?;
    let words = u32::try_from(n)
        .ok()
        .and_then(|e| (q as u64 + 1).checked_pow(e))
        .ok_or(Error::CapExceeded {
            r,
            bound: u64::MAX,
            cap,
        })?;
    for c in enumerate_all_capped(r, words, cap)? {
        let outcome = hj_search(q, n, ap_k, |w| word_index(w, n).and_then(|i| c.get(i)))?;
        if outcome.instance().is_none() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(q: u32, pairs: &[(u64, u32)]) -> LocatedWord {
        LocatedWord::new(q, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn concat_examples() {
        let a = w(3, &[(1, 0)]);
        let b = w(3, &[(3, 2)]);
        assert_eq!(a.concat(&b).unwrap(), w(3, &[(1, 0), (3, 2)]));
        let e = LocatedWord::empty(3).unwrap();
        assert_eq!(e.concat(&a).unwrap(), a);
        assert!(matches!(
            a.concat(&w(3, &[(1, 1)])),
            Err(Error::DomainOverlap(1))
        ));
        assert!(matches!(
            LocatedWord::new(2, [(1, 2)]),
            Err(Error::LetterOutOfAlphabet { .. })
        ));
        assert!(LocatedWord::new(2, [(0, 1)]).is_err());
    }

    #[test]
    fn substitution() {
        let vw = LocatedVariableWord::new(2, [(2, None), (3, Some(0)), (5, None)]).unwrap();
        let s1 = vw.substitute(1).unwrap();
        assert_eq!(s1, w(2, &[(2, 1), (3, 0), (5, 1)]));
        assert!(s1.domain().eq(vw.domain()));
        assert_ne!(vw.substitute(0).unwrap(), s1);
        assert!(vw.substitute(2).is_err());
        assert!(LocatedVariableWord::new(2, [(1, Some(0))]).is_err());
    }

    #[test]
    fn projection_examples() {
        let t = GroundTable::build(10_000).unwrap();
        assert_eq!(h_project(&LocatedWord::empty(2).unwrap(), &t).unwrap(), 1);
        assert_eq!(h_project(&w(3, &[(2, 2)]), &t).unwrap(), 3);
        assert_eq!(h_project(&w(2, &[(2, 0), (5, 1)]), &t).unwrap(), 5);
    }

    #[test]
    fn constant_coloring_least_instance() {
        let out = hj_search(2, 3, None, |_| Some(1)).unwrap();
        let inst = out.instance().unwrap();
        assert!(inst.alpha.is_empty());
        assert_eq!(inst.gamma, vec![1]);
        let out = hj_search(2, 4, Some(1), |_| Some(1)).unwrap();
        let inst = out.instance().unwrap();
        assert_eq!(inst.ap, Some(vec![2, 3]));
        assert!(verify_hj(2, inst, |_| Some(1)).unwrap());
        assert!(!verify_hj(2, inst, |w| Some(1 + w.get(1).unwrap_or(0))).unwrap());
    }

    #[test]
    fn window_too_small_for_progression() {
        assert_eq!(
            hj_search(2, 2, Some(1), |_| Some(1)).unwrap(),
            HjOutcome::Exhausted { candidates: 0 }
        );
    }

    #[test]
    fn word_index_is_a_bijection() {
        let n = 3;
        let mut seen = [false; 27];
        for code in 0..27u64 {
            let mut pairs = Vec::new();
            let mut c = code;
            for p in 1..=n {
                if c % 3 != 0 {
                    pairs.push((p, (c % 3 - 1) as u32));
                }
                c /= 3;
            }
            let i = word_index(&w(2, &pairs), n).unwrap();
            assert_eq!(i, code);
            seen[i as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(word_index(&w(2, &[(4, 0)]), 3), None);
    }

    #[test]
    fn serialized_as_pairs() {
        let word = w(3, &[(1, 0), (4, 2)]);
        let v = serde_json::to_value(&word).unwrap();
        assert_eq!(v, serde_json::json!({"q": 3, "letters": [[1, 0], [4, 2]]}));
        assert_eq!(serde_json::from_value::<LocatedWord>(v).unwrap(), word);
        assert!(serde_json::from_value::<LocatedWord>(
            serde_json::json!({"q": 2, "letters": [[1, 5]]})
        )
        .is_err());
    }
}
