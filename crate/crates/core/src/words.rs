//! Letters, words, cyclic words, and series with exact rational coefficients.
//!
//! A *letter* is a coordinate of the completed path algebra of a double
//! quiver: an arrow `x`, a dual arrow `xi`, or one of the degree-carrying
//! loops `alpha_i` (degree 1) and `beta_i` (degree `1-d`) adjoined at each
//! vertex. Words multiply left to right: `a·b` requires `target(a) =
//! source(b)`. A *cyclic word* is an equivalence class of closed words
//! under rotation with Koszul signs: moving the first letter `a` past the
//! remainder `v` multiplies the class by `(-1)^{deg(a)·deg(v)}`. Classes
//! fixed by a rotation of sign `-1` vanish identically and carry a zero
//! flag.
//!
//! Series are finite rational combinations of canonical cyclic words (or of
//! open paths with common endpoints), together with a precision: `Infinite`
//! for polynomial data, or `Finite(N)` meaning coefficients are only known
//! for words of length at most `N`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Exact rational coefficient type used throughout the crate.
pub type Coeff = BigRational;

/// The four kinds of coordinate, in global order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Kind {
    /// Degree-1 loop `alpha_i` adjoined at vertex `i`.
    Alpha,
    /// Arrow of the underlying quiver.
    X,
    /// Dual arrow (degree `2-d-r` for an arrow of degree `r`).
    Xi,
    /// Degree-`1-d` loop `beta_i`, symplectic dual of `alpha_i`.
    Beta,
}

/// A single coordinate of the completed path algebra.
///
/// Letters order by kind, then source vertex, then degree, then index,
/// with the target vertex as a final tiebreaker; this fixes canonical
/// representatives for cyclic words and the order of series terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub kind: Kind,
    pub src: u32,
    pub tgt: u32,
    pub deg: i64,
    /// 1-based index among parallel arrows of the same `(src, tgt, deg)`;
    /// 0 for `alpha`/`beta`.
    pub idx: u32,
}

impl Letter {
    pub fn alpha(v: u32) -> Self {
        Letter { kind: Kind::Alpha, src: v, tgt: v, deg: 1, idx: 0 }
    }

    pub fn beta(v: u32, d: i64) -> Self {
        Letter { kind: Kind::Beta, src: v, tgt: v, deg: 1 - d, idx: 0 }
    }

    pub fn x(src: u32, tgt: u32, deg: i64, idx: u32) -> Self {
        Letter { kind: Kind::X, src, tgt, deg, idx }
    }

    pub fn xi(src: u32, tgt: u32, deg: i64, idx: u32) -> Self {
        Letter { kind: Kind::Xi, src, tgt, deg, idx }
    }

    /// Degree parity, the quantity entering every Koszul sign.
    pub fn parity(&self) -> u8 {
        (self.deg.rem_euclid(2)) as u8
    }

    /// True for the primal half of a symplectic pair (`alpha`, `x`).
    pub fn is_primal(&self) -> bool {
        matches!(self.kind, Kind::Alpha | Kind::X)
    }

    /// Stable textual identifier: `alpha_i`, `beta_i`,
    /// `x:{src}->{tgt}:{deg}:{idx}`, `xi:{src}->{tgt}:{deg}:{idx}`.
    pub fn id(&self) -> String {
        match self.kind {
            Kind::Alpha => format!("alpha_{}", self.src),
            Kind::Beta => format!("beta_{}", self.src),
            Kind::X => format!("x:{}->{}:{}:{}", self.src, self.tgt, self.deg, self.idx),
            Kind::Xi => format!("xi:{}->{}:{}:{}", self.src, self.tgt, self.deg, self.idx),
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.kind, self.src, self.deg, self.idx, self.tgt).cmp(&(
            other.kind, other.src, other.deg, other.idx, other.tgt,
        ))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Sum of letter parities, mod 2.
pub fn word_parity(w: &[Letter]) -> u8 {
    w.iter().map(|l| l.parity()).fold(0, |a, b| a ^ b)
}

/// Sum of letter degrees (the function degree of the word).
pub fn word_degree(w: &[Letter]) -> i64 {
    w.iter().map(|l| l.deg).sum()
}

/// True when consecutive letters compose (`target = source` along the word).
pub fn is_composable(w: &[Letter]) -> bool {
    w.windows(2).all(|p| p[0].tgt == p[1].src)
}

/// True for composable words that close up (`target(last) = source(first)`).
pub fn is_closed(w: &[Letter]) -> bool {
    is_composable(w) && w.first().is_none_or(|f| w.last().unwrap().tgt == f.src)
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("word is not composable: target/source mismatch inside `{0}`")]
    NotComposable(String),
    #[error("word is not closed: `{0}` does not return to its source vertex")]
    NotClosed(String),
    #[error("empty word has no cyclic class")]
    EmptyWord,
    #[error("path endpoints mismatch: expected ({0},{1}), got ({2},{3})")]
    EndpointMismatch(u32, u32, u32, u32),
    #[error("series are over incompatible coordinate spaces (letter `{0}`)")]
    IncompatibleAlphabets(String),
}

/// Render a word as `id*id*...` (used by errors and reports).
pub fn word_id(w: &[Letter]) -> String {
    if w.is_empty() {
        return "1".to_owned();
    }
    w.iter().map(Letter::id).collect::<Vec<_>>().join("*")
}

/// All rotations of a closed word, each with the Koszul sign `s` such that
/// `[w] = s · [rotation]`. The identity rotation comes first.
pub fn rotations_with_signs(w: &[Letter]) -> Vec<(Vec<Letter>, i8)> {
    let n = w.len();
    let pw = word_parity(w);
    let mut out = Vec::with_capacity(n);
    let mut cur: Vec<Letter> = w.to_vec();
    let mut bit = 0u8;
    for _ in 0..n {
        out.push((cur.clone(), if bit == 1 { -1 } else { 1 }));
        let a = cur[0];
        // parity of the remainder = word parity minus the moved letter
        bit ^= a.parity() & (pw ^ a.parity());
        cur.rotate_left(1);
    }
    out
}

/// Canonical representative of a nonzero cyclic class: a closed word that is
/// the lexicographically least rotation of its class. Orders by length, then
/// letter order, so series terms list shortest words first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CyclicWord {
    letters: Vec<Letter>,
}

impl CyclicWord {
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl PartialOrd for CyclicWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CyclicWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.letters.len(), &self.letters).cmp(&(other.letters.len(), &other.letters))
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&word_id(&self.letters))
    }
}

/// Result of canonicalizing a closed word: the least rotation, the sign
/// relating the input to it (`[input] = sign · [word]`), and a zero flag for
/// classes killed by their own rotation symmetry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Canonical {
    pub word: CyclicWord,
    pub sign: i8,
    pub is_zero: bool,
}

/// Canonicalize a closed word. Errors on empty, non-composable, or
/// non-closed input.
pub fn canonical_cyclic(w: &[Letter]) -> Result<Canonical, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    if !is_composable(w) {
        return Err(WordError::NotComposable(word_id(w)));
    }
    if !is_closed(w) {
        return Err(WordError::NotClosed(word_id(w)));
    }
    let mut best: Option<(Vec<Letter>, i8)> = None;
    let mut is_zero = false;
    for (rot, sig) in rotations_with_signs(w) {
        if sig == -1 && rot == w {
            is_zero = true;
        }
        match &best {
            Some((b, _)) if *b <= rot => {}
            _ => best = Some((rot, sig)),
        }
    }
    let (letters, sign) = best.unwrap();
    Ok(Canonical { word: CyclicWord { letters }, sign, is_zero })
}

/// Word-length precision of a series: `Finite(N)` means coefficients are
/// exact on words of length ≤ N and unknown beyond; `Infinite` is exact
/// polynomial data. Ordered with `Infinite` greatest; the precision of a sum
/// is the minimum.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Precision {
    Finite(i64),
    Infinite,
}

impl Precision {
    pub fn min(self, other: Precision) -> Precision {
        std::cmp::min(self, other)
    }

    /// Add a length offset, saturating at `Infinite`.
    pub fn plus(self, k: i64) -> Precision {
        match self {
            Precision::Finite(n) => Precision::Finite(n + k),
            Precision::Infinite => Precision::Infinite,
        }
    }

    /// True when words of length `len` are within this precision.
    pub fn admits(self, len: usize) -> bool {
        match self {
            Precision::Finite(n) => (len as i64) <= n,
            Precision::Infinite => true,
        }
    }
}

impl PartialOrd for Precision {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Precision {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Precision::Infinite, Precision::Infinite) => std::cmp::Ordering::Equal,
            (Precision::Infinite, _) => std::cmp::Ordering::Greater,
            (_, Precision::Infinite) => std::cmp::Ordering::Less,
            (Precision::Finite(a), Precision::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Finite(n) => write!(f, "{n}"),
            Precision::Infinite => f.write_str("inf"),
        }
    }
}

/// A finite rational combination of nonzero canonical cyclic words, with a
/// length precision. Terms iterate shortest-first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclicSeries {
    terms: BTreeMap<CyclicWord, Coeff>,
    precision: Precision,
}

impl CyclicSeries {
    pub fn zero() -> Self {
        CyclicSeries { terms: BTreeMap::new(), precision: Precision::Infinite }
    }

    pub fn zero_with_precision(p: Precision) -> Self {
        CyclicSeries { terms: BTreeMap::new(), precision: p }
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Lower (never raise) the precision, discarding terms beyond it.
    pub fn truncate(&mut self, p: Precision) {
        self.precision = self.precision.min(p);
        let prec = self.precision;
        self.terms.retain(|w, _| prec.admits(w.len()));
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CyclicWord, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &CyclicWord) -> Coeff {
        self.terms.get(w).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Add `c` times the cyclic class of the closed word `w`, canonicalizing
    /// and dropping symmetry-killed classes and terms beyond the precision.
    pub fn add_word(&mut self, w: &[Letter], c: Coeff) -> Result<(), WordError> {
        if c.is_zero() || !self.precision.admits(w.len()) {
            return Ok(());
        }
        let canon = canonical_cyclic(w)?;
        if canon.is_zero {
            return Ok(());
        }
        let signed = if canon.sign == -1 { -c } else { c };
        self.add_canonical(canon.word, signed);
        Ok(())
    }

    /// Add `c` times an already-canonical nonzero class.
    pub fn add_canonical(&mut self, w: CyclicWord, c: Coeff) {
        if c.is_zero() || !self.precision.admits(w.len()) {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(Coeff::zero);
        *entry += c;
        if entry.is_zero() {
            // re-fetch the key to remove: closure borrow rules
            let dead: Vec<CyclicWord> =
                self.terms.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    /// Build from closed words; precision `Infinite`.
    pub fn from_words<'a, I>(words: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = (&'a [Letter], Coeff)>,
    {
        let mut s = CyclicSeries::zero();
        for (w, c) in words {
            s.add_word(w, c)?;
        }
        Ok(s)
    }

    pub fn add(&self, other: &CyclicSeries) -> CyclicSeries {
        let mut out = self.clone();
        out.truncate(other.precision);
        for (w, c) in &other.terms {
            out.add_canonical(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CyclicSeries) -> CyclicSeries {
        self.add(&other.scale(&-Coeff::one()))
    }

    pub fn scale(&self, c: &Coeff) -> CyclicSeries {
        if c.is_zero() {
            return CyclicSeries::zero_with_precision(self.precision);
        }
        CyclicSeries {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
            precision: self.precision,
        }
    }

    pub fn neg(&self) -> CyclicSeries {
        self.scale(&-Coeff::one())
    }

    /// Function degree if all terms agree; `None` for mixed or empty support.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|w| word_degree(w.letters()));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Shortest supported word length (`None` when empty).
    pub fn min_length(&self) -> Option<usize> {
        self.terms.keys().next().map(|w| w.len())
    }

    /// Longest supported word length (`None` when empty).
    pub fn max_length(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|w| w.len())
    }

    /// True when every term has cyclic degree ≥ 3.
    pub fn is_minimal(&self) -> bool {
        self.min_length().is_none_or(|n| n >= 3)
    }

    /// The set of letters appearing in the support.
    pub fn support_letters(&self) -> BTreeSet<Letter> {
        self.terms.keys().flat_map(|w| w.letters().iter().copied()).collect()
    }

    /// Drop every term containing a letter from `kill`.
    pub fn restrict(&self, kill: &BTreeSet<Letter>) -> CyclicSeries {
        CyclicSeries {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.letters().iter().all(|l| !kill.contains(l)))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
            precision: self.precision,
        }
    }

    /// Keep only terms of the given cyclic degree (word length).
    pub fn length_part(&self, len: usize) -> CyclicSeries {
        CyclicSeries {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == len)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
            precision: self.precision,
        }
    }

    /// Keep only terms whose degree parity matches `par`.
    pub fn parity_part(&self, par: u8) -> CyclicSeries {
        CyclicSeries {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| word_parity(w.letters()) == par)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
            precision: self.precision,
        }
    }
}

/// A finite rational combination of open paths with common endpoints.
///
/// The empty path (a lone idempotent) is allowed; its vertex is carried by
/// the endpoints field, fixed at construction or by the first added word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathSeries {
    terms: BTreeMap<Vec<Letter>, Coeff>,
    endpoints: Option<(u32, u32)>,
    precision: Precision,
}

impl PathSeries {
    pub fn zero() -> Self {
        PathSeries { terms: BTreeMap::new(), endpoints: None, precision: Precision::Infinite }
    }

    pub fn zero_at(src: u32, tgt: u32) -> Self {
        PathSeries {
            terms: BTreeMap::new(),
            endpoints: Some((src, tgt)),
            precision: Precision::Infinite,
        }
    }

    pub fn endpoints(&self) -> Option<(u32, u32)> {
        self.endpoints
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn truncate(&mut self, p: Precision) {
        self.precision = self.precision.min(p);
        let prec = self.precision;
        self.terms.retain(|w, _| prec.admits(w.len()));
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Letter>, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[Letter]) -> Coeff {
        self.terms.get(w).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Add `c` times the path `w`. The word must be composable and share
    /// endpoints with the series (the first word fixes them). The empty
    /// word is accepted only when endpoints are already set and diagonal.
    pub fn add_word(&mut self, w: &[Letter], c: Coeff) -> Result<(), WordError> {
        if !is_composable(w) {
            return Err(WordError::NotComposable(word_id(w)));
        }
        let ep = match (w.first(), self.endpoints) {
            (Some(f), _) => (f.src, w.last().unwrap().tgt),
            (None, Some((s, t))) if s == t => (s, t),
            (None, _) => return Err(WordError::EmptyWord),
        };
        match self.endpoints {
            None => self.endpoints = Some(ep),
            Some((s, t)) if (s, t) != ep => {
                return Err(WordError::EndpointMismatch(s, t, ep.0, ep.1))
            }
            _ => {}
        }
        if c.is_zero() || !self.precision.admits(w.len()) {
            return Ok(());
        }
        let entry = self.terms.entry(w.to_vec()).or_insert_with(Coeff::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(w);
        }
        Ok(())
    }

    pub fn add(&self, other: &PathSeries) -> Result<PathSeries, WordError> {
        let mut out = self.clone();
        out.truncate(other.precision);
        if out.endpoints.is_none() {
            out.endpoints = other.endpoints;
        }
        for (w, c) in &other.terms {
            out.add_word(w, c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> PathSeries {
        if c.is_zero() {
            return PathSeries {
                terms: BTreeMap::new(),
                endpoints: self.endpoints,
                precision: self.precision,
            };
        }
        PathSeries {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
            endpoints: self.endpoints,
            precision: self.precision,
        }
    }

    /// Function degree if all terms agree; `None` for mixed support. An
    /// empty series reports `None`.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|w| word_degree(w));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn min_length(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).min()
    }

    /// The linear (length-1) part as a list of `(letter, coeff)`.
    pub fn linear_part(&self) -> Vec<(Letter, Coeff)> {
        self.terms
            .iter()
            .filter(|(w, _)| w.len() == 1)
            .map(|(w, c)| (w[0], c.clone()))
            .collect()
    }
}

/// The three gradings of a closed word at ambient dimension `d`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Grading {
    /// Sum of letter degrees.
    pub func: i64,
    /// Word length.
    pub cyc: usize,
    /// Cohomological degree `func + d - 2`.
    pub coh: i64,
}

/// Gradings of a word at ambient dimension `d`.
pub fn grading(w: &[Letter], d: i64) -> Grading {
    let func = word_degree(w);
    Grading { func, cyc: w.len(), coh: func + d - 2 }
}

/// The coordinate alphabet of a double quiver: every letter, its stable id,
/// and the symplectic pairing `alpha_i ↔ beta_i`, `x ↔ xi`.
#[derive(Clone, Debug)]
pub struct Alphabet {
    d: i64,
    letters: Vec<Letter>,
    by_id: BTreeMap<String, Letter>,
    dual: BTreeMap<Letter, Letter>,
}

impl Alphabet {
    /// Build from a set of letters. The set is closed under the symplectic
    /// pairing (`x ↔ xi` with reversed endpoints and degree `2-d-r`, same
    /// index), and every vertex mentioned contributes `alpha`/`beta`.
    pub fn new(d: i64, letters: impl IntoIterator<Item = Letter>) -> Result<Self, WordError> {
        Alphabet::new_with_vertices(d, letters, [])
    }

    /// Like [`Alphabet::new`], but guarantees `alpha`/`beta` coordinates for
    /// the listed vertices even when no arrow touches them.
    pub fn new_with_vertices(
        d: i64,
        letters: impl IntoIterator<Item = Letter>,
        vertices: impl IntoIterator<Item = u32>,
    ) -> Result<Self, WordError> {
        let mut set: BTreeSet<Letter> = letters.into_iter().collect();
        let mut vertices: BTreeSet<u32> = vertices.into_iter().collect();
        vertices.extend(set.iter().flat_map(|l| [l.src, l.tgt]));
        for &v in &vertices {
            set.insert(Letter::alpha(v));
            set.insert(Letter::beta(v, d));
        }
        let partner_of = |l: &Letter| match l.kind {
            Kind::Alpha => Letter::beta(l.src, d),
            Kind::Beta => Letter::alpha(l.src),
            Kind::X => Letter::xi(l.tgt, l.src, 2 - d - l.deg, l.idx),
            Kind::Xi => Letter::x(l.tgt, l.src, 2 - d - l.deg, l.idx),
        };
        let partners: Vec<Letter> = set.iter().map(partner_of).collect();
        set.extend(partners);
        let dual: BTreeMap<Letter, Letter> = set.iter().map(|l| (*l, partner_of(l))).collect();
        let letters: Vec<Letter> = set.into_iter().collect();
        let by_id = letters.iter().map(|l| (l.id(), *l)).collect();
        Ok(Alphabet { d, letters, by_id, dual })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// All letters in global order.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn vertices(&self) -> BTreeSet<u32> {
        self.letters.iter().map(|l| l.src).collect()
    }

    pub fn contains(&self, l: &Letter) -> bool {
        self.dual.contains_key(l)
    }

    pub fn letter_by_id(&self, id: &str) -> Option<Letter> {
        self.by_id.get(id).copied()
    }

    /// The symplectic dual partner.
    pub fn dual(&self, l: &Letter) -> Option<Letter> {
        self.dual.get(l).copied()
    }

    /// Letters with `x`/`xi` kind only (the arrow coordinates).
    pub fn arrow_letters(&self) -> impl Iterator<Item = &Letter> {
        self.letters.iter().filter(|l| matches!(l.kind, Kind::X | Kind::Xi))
    }
}

/// Parse a standalone letter id (`alpha_3`, `beta_0`, `x:0->1:-1:2`, ...).
/// Returns the letter and the number of bytes consumed, or `None` if `s`
/// does not begin with a well-formed id.
pub fn parse_letter_id(s: &str, _d: i64) -> Option<(Letter, usize)> {
    fn scan_uint(s: &str) -> Option<(u64, usize)> {
        let n = s.bytes().take_while(u8::is_ascii_digit).count();
        if n == 0 {
            return None;
        }
        s[..n].parse().ok().map(|v| (v, n))
    }
    fn scan_int(s: &str) -> Option<(i64, usize)> {
        let (neg, rest, off) =
            if let Some(r) = s.strip_prefix('-') { (true, r, 1) } else { (false, s, 0) };
        let (v, n) = scan_uint(rest)?;
        Some((if neg { -(v as i64) } else { v as i64 }, n + off))
    }
    for (prefix, greek) in [("alpha_", true), ("beta_", false)] {
        if let Some(rest) = s.strip_prefix(prefix) {
            if let Some((v, n)) = scan_uint(rest) {
                let l = if greek { Letter::alpha(v as u32) } else { Letter::beta(v as u32, _d) };
                return Some((l, prefix.len() + n));
            }
        }
    }
    for (prefix, is_xi) in [("xi:", true), ("x:", false)] {
        if let Some(rest) = s.strip_prefix(prefix) {
            let (src, n1) = scan_uint(rest)?;
            let rest2 = rest[n1..].strip_prefix("->")?;
            let (tgt, n2) = scan_uint(rest2)?;
            let rest3 = rest2[n2..].strip_prefix(':')?;
            let (deg, n3) = scan_int(rest3)?;
            let rest4 = rest3[n3..].strip_prefix(':')?;
            let (idx, n4) = scan_uint(rest4)?;
            let consumed = prefix.len() + n1 + 2 + n2 + 1 + n3 + 1 + n4;
            let l = if is_xi {
                Letter::xi(src as u32, tgt as u32, deg, idx as u32)
            } else {
                Letter::x(src as u32, tgt as u32, deg, idx as u32)
            };
            return Some((l, consumed));
        }
    }
    None
}

/// Recover an alphabet from potential text alone: arrow ids are
/// self-describing, so scanning for well-formed ids and closing under duals
/// reconstructs the coordinate space (given `d`).
pub fn infer_alphabet(text: &str, d: i64) -> Result<Alphabet, WordError> {
    let mut letters = BTreeSet::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if let Some((l, n)) = parse_letter_id(&text[i..], d) {
            letters.insert(l);
            i += n;
        } else {
            i += 1;
        }
    }
    Alphabet::new(d, letters)
}

/// A non-fatal parser event: a term whose cyclic class vanishes by rotation
/// symmetry was dropped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseWarning {
    /// 1-based index of the offending term in the input.
    pub term_index: usize,
    /// The dropped word as written.
    pub word: String,
    /// Always `"symmetry-killed term"`.
    pub message: &'static str,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "term {}: {} `{}`", self.term_index, self.message, self.word)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown identifier at byte {pos}: `{text}`")]
    UnknownIdentifier { pos: usize, text: String },
    #[error("malformed rational at byte {pos}: `{text}`")]
    MalformedRational { pos: usize, text: String },
    #[error("term {term_index}: non-composable word `{word}`")]
    NotComposable { term_index: usize, word: String },
    #[error("term {term_index}: word `{word}` is not closed")]
    NotClosed { term_index: usize, word: String },
    #[error("term {term_index}: constant terms are not cyclic words")]
    ConstantTerm { term_index: usize },
    #[error("unexpected token at byte {pos}: `{text}`")]
    UnexpectedToken { pos: usize, text: String },
    #[error("unexpected end of input")]
    UnexpectedEnd,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Token {
    Plus,
    Minus,
    Star,
    Rat(Coeff),
    Ident(Letter),
}

fn tokenize(text: &str, alphabet: &Alphabet) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        match c {
            b'+' => {
                out.push((Token::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Token::Minus, i));
                i += 1;
            }
            b'*' => {
                out.push((Token::Star, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let numer: num_bigint::BigInt = text[start..i].parse().unwrap();
                let mut denom = num_bigint::BigInt::from(1);
                if i < bytes.len() && bytes[i] == b'/' {
                    i += 1;
                    let dstart = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == dstart {
                        return Err(ParseError::MalformedRational {
                            pos: start,
                            text: text[start..i].to_owned(),
                        });
                    }
                    denom = text[dstart..i].parse().unwrap();
                    if denom.is_zero() {
                        return Err(ParseError::MalformedRational {
                            pos: start,
                            text: text[start..i].to_owned(),
                        });
                    }
                }
                out.push((Token::Rat(Coeff::new(numer, denom)), start));
            }
            _ => {
                // longest-match identifier lookup against the alphabet
                let rest = &text[i..];
                let mut hit: Option<(usize, Letter)> = None;
                for l in alphabet.letters() {
                    let id = l.id();
                    if rest.starts_with(&id) {
                        match hit {
                            Some((n, _)) if n >= id.len() => {}
                            _ => hit = Some((id.len(), *l)),
                        }
                    }
                }
                match hit {
                    Some((n, l)) => {
                        out.push((Token::Ident(l), i));
                        i += n;
                    }
                    None => {
                        let run: String = text[i..]
                            .chars()
                            .take_while(|ch| {
                                ch.is_ascii_alphanumeric()
                                    || matches!(ch, '_' | ':' | '>' | '-' | '\'')
                            })
                            .collect();
                        let shown = if run.is_empty() {
                            text[i..].chars().take(1).collect()
                        } else {
                            run
                        };
                        return Err(ParseError::UnknownIdentifier { pos: i, text: shown });
                    }
                }
            }
        }
    }
    Ok(out)
}

struct RawTerm {
    sign: i8,
    coeff: Coeff,
    word: Vec<Letter>,
}

fn parse_terms(text: &str, alphabet: &Alphabet) -> Result<Vec<RawTerm>, ParseError> {
    let tokens = tokenize(text, alphabet)?;
    let mut terms = Vec::new();
    let mut pos = 0usize;
    let n = tokens.len();
    if n == 0 {
        return Ok(terms);
    }
    let mut sign: i8 = 1;
    // optional leading sign
    match tokens[0].0 {
        Token::Minus => {
            sign = -1;
            pos = 1;
        }
        Token::Plus => {
            pos = 1;
        }
        _ => {}
    }
    loop {
        // one term: [rational '*'] ident ('*' ident)*  |  bare zero rational
        if pos >= n {
            return Err(ParseError::UnexpectedEnd);
        }
        let mut coeff = Coeff::one();
        let mut word: Vec<Letter> = Vec::new();
        match &tokens[pos].0 {
            Token::Rat(r) => {
                coeff = r.clone();
                pos += 1;
                match tokens.get(pos) {
                    Some((Token::Star, _)) => {
                        pos += 1;
                        word.push(expect_ident(&tokens, &mut pos)?);
                    }
                    _ if coeff.is_zero() => {
                        // bare zero stands for the empty series contribution
                        terms.push(RawTerm { sign, coeff: Coeff::zero(), word: Vec::new() });
                        if !advance_separator(&tokens, &mut pos, &mut sign)? {
                            break;
                        }
                        continue;
                    }
                    Some((t, p)) => {
                        return Err(ParseError::UnexpectedToken {
                            pos: *p,
                            text: format!("{t:?}"),
                        })
                    }
                    None => return Err(ParseError::ConstantTerm { term_index: terms.len() + 1 }),
                }
            }
            Token::Ident(l) => {
                word.push(*l);
                pos += 1;
            }
            t => {
                return Err(ParseError::UnexpectedToken {
                    pos: tokens[pos].1,
                    text: format!("{t:?}"),
                })
            }
        }
        while let Some((Token::Star, _)) = tokens.get(pos) {
            pos += 1;
            word.push(expect_ident(&tokens, &mut pos)?);
        }
        terms.push(RawTerm { sign, coeff, word });
        if !advance_separator(&tokens, &mut pos, &mut sign)? {
            break;
        }
    }
    Ok(terms)
}

fn expect_ident(tokens: &[(Token, usize)], pos: &mut usize) -> Result<Letter, ParseError> {
    match tokens.get(*pos) {
        Some((Token::Ident(l), _)) => {
            *pos += 1;
            Ok(*l)
        }
        Some((t, p)) => Err(ParseError::UnexpectedToken { pos: *p, text: format!("{t:?}") }),
        None => Err(ParseError::UnexpectedEnd),
    }
}

fn advance_separator(
    tokens: &[(Token, usize)],
    pos: &mut usize,
    sign: &mut i8,
) -> Result<bool, ParseError> {
    match tokens.get(*pos) {
        None => Ok(false),
        Some((Token::Plus, _)) => {
            *sign = 1;
            *pos += 1;
            Ok(true)
        }
        Some((Token::Minus, _)) => {
            *sign = -1;
            *pos += 1;
            Ok(true)
        }
        Some((t, p)) => Err(ParseError::UnexpectedToken { pos: *p, text: format!("{t:?}") }),
    }
}

/// Parse potential text into a cyclic series (precision `Infinite`),
/// reporting symmetry-killed terms as warnings rather than errors.
pub fn parse_potential(
    text: &str,
    alphabet: &Alphabet,
) -> Result<(CyclicSeries, Vec<ParseWarning>), ParseError> {
    let terms = parse_terms(text, alphabet)?;
    let mut series = CyclicSeries::zero();
    let mut warnings = Vec::new();
    for (i, t) in terms.iter().enumerate() {
        let term_index = i + 1;
        if t.word.is_empty() {
            continue; // bare zero
        }
        let canon = canonical_cyclic(&t.word).map_err(|e| match e {
            WordError::NotClosed(w) => ParseError::NotClosed { term_index, word: w },
            WordError::NotComposable(w) => ParseError::NotComposable { term_index, word: w },
            _ => ParseError::ConstantTerm { term_index },
        })?;
        if canon.is_zero {
            warnings.push(ParseWarning {
                term_index,
                word: word_id(&t.word),
                message: "symmetry-killed term",
            });
            continue;
        }
        let mut c = t.coeff.clone();
        if t.sign == -1 {
            c = -c;
        }
        if canon.sign == -1 {
            c = -c;
        }
        series.add_canonical(canon.word, c);
    }
    Ok((series, warnings))
}

/// Parse a path-series expression (an automorphism image): same grammar,
/// but words are open paths with common endpoints and the empty product is
/// not allowed.
pub fn parse_path_series(text: &str, alphabet: &Alphabet) -> Result<PathSeries, ParseError> {
    let terms = parse_terms(text, alphabet)?;
    let mut series = PathSeries::zero();
    for (i, t) in terms.iter().enumerate() {
        let term_index = i + 1;
        if t.word.is_empty() {
            continue; // bare zero
        }
        let mut c = t.coeff.clone();
        if t.sign == -1 {
            c = -c;
        }
        series.add_word(&t.word, c).map_err(|e| match e {
            WordError::NotComposable(w) => ParseError::NotComposable { term_index, word: w },
            WordError::EndpointMismatch(..) => ParseError::NotComposable {
                term_index,
                word: word_id(&t.word),
            },
            _ => ParseError::ConstantTerm { term_index },
        })?;
    }
    Ok(series)
}

fn format_terms<'a, I>(terms: I) -> String
where
    I: Iterator<Item = (&'a [Letter], &'a Coeff)>,
{
    let mut out = String::new();
    for (w, c) in terms {
        let mag = c.abs();
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if w.is_empty() {
            // the empty path (an idempotent) renders as its bare coefficient
            out.push_str(&mag.to_string());
            continue;
        }
        if !mag.is_one() {
            out.push_str(&mag.to_string());
            out.push('*');
        }
        out.push_str(&word_id(w));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text form of a cyclic series: terms shortest-first then
/// lexicographic, reduced rationals, unit coefficients omitted.
/// `parse_potential(print_potential(P)) == P` for any `P`.
pub fn print_potential(p: &CyclicSeries) -> String {
    format_terms(p.terms().map(|(w, c)| (w.letters(), c)))
}

/// Canonical text form of a path series (same conventions; length order).
pub fn print_path_series(p: &PathSeries) -> String {
    let mut items: Vec<(&Vec<Letter>, &Coeff)> = p.terms().collect();
    items.sort_by_key(|(w, _)| (w.len(), (*w).clone()));
    format_terms(items.into_iter().map(|(w, c)| (w.as_slice(), c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Coeff {
        Coeff::from_integer(n.into())
    }

    // single-vertex alphabet at dimension d with one extra loop of degree r
    fn loop_alphabet(d: i64, r: i64) -> Alphabet {
        Alphabet::new(d, [Letter::x(0, 0, r, 1)]).unwrap()
    }

    #[test]
    fn letter_order_follows_kind_vertex_degree_index() {
        let d = 3;
        let a0 = Letter::alpha(0);
        let a1 = Letter::alpha(1);
        let x_low = Letter::x(0, 0, -1, 1);
        let x_hi = Letter::x(0, 0, 0, 1);
        let x_hi2 = Letter::x(0, 0, 0, 2);
        let xi = Letter::xi(0, 0, -1, 1);
        let b0 = Letter::beta(0, d);
        let mut v = vec![b0, xi, x_hi2, x_hi, x_low, a1, a0];
        v.sort();
        assert_eq!(v, vec![a0, a1, x_low, x_hi, x_hi2, xi, b0]);
    }

    #[test]
    fn rotation_signs_compose() {
        // Koszul consistency: rotating by k then l accumulates the same sign
        // as rotating by k+l directly.
        let x = Letter::x(0, 0, 0, 1);
        let xi = Letter::xi(0, 0, -1, 1);
        let a = Letter::alpha(0);
        let b = Letter::beta(0, 3);
        let words: Vec<Vec<Letter>> = vec![
            vec![a, a, b],
            vec![x, xi, a, b],
            vec![xi, xi, x],
            vec![a, x, xi, b, x],
            vec![b, b, a, a],
        ];
        for w in words {
            let rots = rotations_with_signs(&w);
            let n = w.len();
            for k in 0..n {
                let (rk, sk) = &rots[k];
                let inner = rotations_with_signs(rk);
                for l in 0..n {
                    let (rl, sl) = &inner[l];
                    let (rkl, skl) = &rots[(k + l) % n];
                    assert_eq!(rl, rkl);
                    assert_eq!(sk * sl, *skl, "sign composition at k={k}, l={l}");
                }
            }
        }
    }

    #[test]
    fn canonical_picks_least_rotation_with_sign() {
        // [y x] = (-1)^{deg y · deg x} [x y]; with two even loops the sign
        // is +1 and the canonical representative sorts the lower index first.
        let x = Letter::x(0, 0, 0, 1);
        let y = Letter::x(0, 0, 0, 2);
        let c = canonical_cyclic(&[y, x]).unwrap();
        assert_eq!(c.word.letters(), &[x, y]);
        assert_eq!(c.sign, 1);
        assert!(!c.is_zero);
    }

    #[test]
    fn odd_square_is_symmetry_killed() {
        // [xi xi] with deg xi = -1: the one-step rotation fixes the word
        // with sign (-1)^{1·1} = -1, so the class vanishes.
        let xi = Letter::xi(0, 0, -1, 1);
        let c = canonical_cyclic(&[xi, xi]).unwrap();
        assert!(c.is_zero);
    }

    #[test]
    fn alpha_alpha_beta_survives() {
        let a = Letter::alpha(0);
        let b = Letter::beta(0, 3);
        let c = canonical_cyclic(&[a, a, b]).unwrap();
        assert!(!c.is_zero);
        assert_eq!(c.word.letters(), &[a, a, b]);
    }

    #[test]
    fn non_closed_word_rejected() {
        let x01 = Letter::x(0, 1, 0, 1);
        assert!(matches!(canonical_cyclic(&[x01]), Err(WordError::NotClosed(_))));
        let x12 = Letter::x(1, 2, 0, 1);
        let x00 = Letter::x(0, 0, 0, 1);
        assert!(matches!(
            canonical_cyclic(&[x00, x12]),
            Err(WordError::NotComposable(_))
        ));
    }

    #[test]
    fn series_cancellation_and_precision() {
        let x = Letter::x(0, 0, 0, 1);
        let mut s = CyclicSeries::zero();
        s.add_word(&[x, x, x], rat(1)).unwrap();
        s.add_word(&[x, x, x], rat(-1)).unwrap();
        assert!(s.is_zero());

        let mut t = CyclicSeries::zero_with_precision(Precision::Finite(2));
        t.add_word(&[x, x, x], rat(5)).unwrap();
        assert!(t.is_zero(), "beyond-precision words are dropped");
        t.add_word(&[x], rat(2)).unwrap();
        assert_eq!(t.len(), 1);

        let u = t.add(&CyclicSeries::zero());
        assert_eq!(u.precision(), Precision::Finite(2));
    }

    #[test]
    fn precision_order_and_arithmetic() {
        assert!(Precision::Finite(3) < Precision::Finite(5));
        assert!(Precision::Finite(1000) < Precision::Infinite);
        assert_eq!(Precision::Infinite.min(Precision::Finite(4)), Precision::Finite(4));
        assert_eq!(Precision::Infinite.plus(7), Precision::Infinite);
        assert_eq!(Precision::Finite(4).plus(-2), Precision::Finite(2));
    }

    #[test]
    fn parse_and_print_round_trip() {
        let ab = loop_alphabet(3, 0);
        let x = ab.letter_by_id("x:0->0:0:1").unwrap();
        let xi = ab.letter_by_id("xi:0->0:-1:1").unwrap();
        let a = ab.letter_by_id("alpha_0").unwrap();
        let b = ab.letter_by_id("beta_0").unwrap();

        let text = "alpha_0*alpha_0*beta_0 + x:0->0:0:1*xi:0->0:-1:1*alpha_0 - 3/2*x:0->0:0:1*x:0->0:0:1*x:0->0:0:1";
        let (p, warns) = parse_potential(text, &ab).unwrap();
        assert!(warns.is_empty());
        assert_eq!(p.coeff(&canonical_cyclic(&[a, a, b]).unwrap().word), rat(1));
        assert_eq!(
            p.coeff(&canonical_cyclic(&[x, x, x]).unwrap().word),
            Coeff::new((-3).into(), 2.into())
        );
        let printed = print_potential(&p);
        let (q, _) = parse_potential(&printed, &ab).unwrap();
        assert_eq!(p, q);
        // canonicalization folds the rotated alpha to the front
        assert_eq!(
            p.coeff(&canonical_cyclic(&[a, x, xi]).unwrap().word).is_zero(),
            false
        );
        let _ = xi;
    }

    #[test]
    fn parse_cancellation_to_zero() {
        let ab = loop_alphabet(3, 0);
        let (p, warns) =
            parse_potential("x:0->0:0:1*x:0->0:0:1*x:0->0:0:1 - x:0->0:0:1*x:0->0:0:1*x:0->0:0:1", &ab)
                .unwrap();
        assert!(warns.is_empty());
        assert!(p.is_zero());
        assert_eq!(print_potential(&p), "0");
    }

    #[test]
    fn parse_symmetry_killed_warning() {
        // deg -1 loop's dual square dies by rotation symmetry
        let ab = loop_alphabet(3, 0);
        let (p, warns) = parse_potential("xi:0->0:-1:1*xi:0->0:-1:1", &ab).unwrap();
        assert!(p.is_zero());
        assert_eq!(warns.len(), 1);
        assert_eq!(warns[0].message, "symmetry-killed term");
        assert_eq!(warns[0].term_index, 1);
    }

    #[test]
    fn parse_bare_zero_and_leading_minus() {
        let ab = loop_alphabet(3, 0);
        let (p, _) = parse_potential("0", &ab).unwrap();
        assert!(p.is_zero());
        let (q, _) = parse_potential("-x:0->0:0:1*x:0->0:0:1*x:0->0:0:1", &ab).unwrap();
        let x = ab.letter_by_id("x:0->0:0:1").unwrap();
        assert_eq!(q.coeff(&canonical_cyclic(&[x, x, x]).unwrap().word), rat(-1));
    }

    #[test]
    fn parse_errors_carry_location() {
        let ab = loop_alphabet(3, 0);
        match parse_potential("x:0->0:0:1*frob", &ab) {
            Err(ParseError::UnknownIdentifier { pos, text }) => {
                assert_eq!(pos, 11);
                assert_eq!(text, "frob");
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
        assert!(matches!(
            parse_potential("3/0*x:0->0:0:1", &ab),
            Err(ParseError::MalformedRational { .. })
        ));
        assert!(matches!(
            parse_potential("alpha_0*x:0->0:0:1", &ab).map(|_| ()),
            Ok(()) // closed loop at one vertex: fine
        ));
    }

    #[test]
    fn longest_match_distinguishes_parallel_indices() {
        let ab = Alphabet::new(3, [Letter::x(0, 0, 0, 1), Letter::x(0, 0, 0, 12)]).unwrap();
        let (p, _) = parse_potential(
            "x:0->0:0:12*x:0->0:0:12*x:0->0:0:12 + x:0->0:0:1*x:0->0:0:1*x:0->0:0:1",
            &ab,
        )
        .unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn infer_alphabet_from_text() {
        let text = "x:0->1:-1:1*xi:1->0:0:1 + alpha_0*alpha_0*beta_0";
        let ab = infer_alphabet(text, 3).unwrap();
        assert!(ab.letter_by_id("x:0->1:-1:1").is_some());
        assert!(ab.letter_by_id("xi:1->0:0:1").is_some());
        assert!(ab.letter_by_id("alpha_1").is_some(), "duals and greeks closed over");
        let (p, _) = parse_potential(text, &ab).unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn path_series_endpoints_and_empty_word() {
        let x01 = Letter::x(0, 1, 0, 1);
        let x10 = Letter::x(1, 0, 0, 1);
        let mut p = PathSeries::zero();
        p.add_word(&[x01], rat(2)).unwrap();
        assert_eq!(p.endpoints(), Some((0, 1)));
        assert!(matches!(
            p.add_word(&[x10], rat(1)),
            Err(WordError::EndpointMismatch(..))
        ));
        let mut q = PathSeries::zero_at(0, 0);
        q.add_word(&[], rat(1)).unwrap();
        assert_eq!(q.coeff(&[]), rat(1));
        assert_eq!(print_path_series(&q), "1");
    }

    #[test]
    fn grading_reports_all_three_degrees() {
        let x = Letter::x(0, 0, -1, 1);
        let g = grading(&[x, x], 5);
        assert_eq!(g.func, -2);
        assert_eq!(g.cyc, 2);
        assert_eq!(g.coh, 1);
    }

    #[test]
    fn restrict_drops_killed_letters() {
        let ab = loop_alphabet(3, 0);
        let x = ab.letter_by_id("x:0->0:0:1").unwrap();
        let a = ab.letter_by_id("alpha_0").unwrap();
        let b = ab.letter_by_id("beta_0").unwrap();
        let mut p = CyclicSeries::zero();
        p.add_word(&[x, x, x], rat(1)).unwrap();
        p.add_word(&[a, a, b], rat(1)).unwrap();
        let kill: BTreeSet<Letter> = [a, b].into_iter().collect();
        let r = p.restrict(&kill);
        assert_eq!(r.len(), 1);
        assert!(!r.coeff(&canonical_cyclic(&[x, x, x]).unwrap().word).is_zero());
    }

    #[test]
    fn zero_detection_matches_free_algebra_symmetrization() {
        // brute-force oracle: sum over rotations with signs in the free
        // algebra; the class is zero iff the symmetrization cancels.
        let letters = [
            Letter::x(0, 0, 0, 1),
            Letter::x(0, 0, -1, 1),
            Letter::xi(0, 0, -1, 1),
            Letter::alpha(0),
            Letter::beta(0, 3),
        ];
        let mut checked = 0usize;
        for len in 1..=5usize {
            let mut idx = vec![0usize; len];
            loop {
                let w: Vec<Letter> = idx.iter().map(|&i| letters[i]).collect();
                let canon = canonical_cyclic(&w).unwrap();
                let mut sym: BTreeMap<Vec<Letter>, i64> = BTreeMap::new();
                for (rot, sig) in rotations_with_signs(&w) {
                    *sym.entry(rot).or_insert(0) += sig as i64;
                }
                sym.retain(|_, v| *v != 0);
                assert_eq!(canon.is_zero, sym.is_empty(), "word {}", word_id(&w));
                checked += 1;
                // odometer over letter indices
                let mut k = 0;
                loop {
                    if k == len {
                        break;
                    }
                    idx[k] += 1;
                    if idx[k] < letters.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == len {
                    break;
                }
            }
        }
        assert!(checked > 3000);
    }
}
