//! One-bit propositions about two-level systems and the states they define.
//!
//! A [`Proposition`] asserts that a Pauli-string observable (one letter per
//! system) takes the value `+1` (true) or `−1` (false). `N` systems carry
//! exactly `N` bits, so a valid [`PropositionSet`] holds `N` commuting,
//! independent propositions; it then pins down a unique state up to global
//! phase. Spending the bits on single-site observables gives a product state;
//! spending them on joint observables gives an entangled one.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::qmath::{site_mask, Operator, OperatorKind, StateVector, C64, CHAINED_TOL};
use crate::{Error, Result};

/// Sets with at most this many propositions are checked for dependence by
/// enumerating every subset; larger ones use GF(2) elimination.
pub const EXHAUSTIVE_LIMIT: usize = 4;

const COLUMN_FLOOR: f64 = 1e-8;
const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn operator(self) -> Operator {
        match self {
            Self::I => Operator::identity(1),
            Self::X => Operator::pauli_x(),
            Self::Y => Operator::pauli_y(),
            Self::Z => Operator::pauli_z(),
        }
    }

    /// `(x, z)` bits of the symplectic encoding.
    fn bits(self) -> (bool, bool) {
        match self {
            Self::I => (false, false),
            Self::X => (true, false),
            Self::Y => (true, true),
            Self::Z => (false, true),
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Self::I),
            'X' => Some(Self::X),
            'Y' => Some(Self::Y),
            'Z' => Some(Self::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Self::I => 'I',
            Self::X => 'X',
            Self::Y => 'Y',
            Self::Z => 'Z',
        }
    }
}

/// "The Pauli string `letters` has value `+1`" (`truth = true`) or `−1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proposition {
    letters: Vec<Pauli>,
    truth: bool,
    label: String,
}

impl Proposition {
    pub fn new(letters: Vec<Pauli>, truth: bool) -> Result<Self> {
        if letters.is_empty() || letters.iter().all(|&p| p == Pauli::I) {
            return Err(Error::InvalidArgument(
                "a proposition needs at least one non-identity letter".into(),
            ));
        }
        if letters.len() > crate::qmath::MAX_SYSTEMS {
            return Err(Error::TooManySystems(letters.len()));
        }
        let label = format_letters(&letters, truth);
        Ok(Self {
            letters,
            truth,
            label,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn truth(&self) -> bool {
        self.truth
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn num_systems(&self) -> usize {
        self.letters.len()
    }

    /// The eigenvalue the proposition asserts.
    pub fn eigenvalue(&self) -> f64 {
        if self.truth {
            1.0
        } else {
            -1.0
        }
    }

    /// Number of sites with a non-identity letter.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    fn symplectic(&self) -> Symplectic {
        let mut s = Symplectic::default();
        for (i, p) in self.letters.iter().enumerate() {
            let (x, z) = p.bits();
            s.x |= u64::from(x) << i;
            s.z |= u64::from(z) << i;
        }
        s
    }

    fn commutes_with(&self, other: &Self) -> bool {
        let (a, b) = (self.symplectic(), other.symplectic());
        ((a.x & b.z) ^ (a.z & b.x)).count_ones() % 2 == 0
    }
}

fn format_letters(letters: &[Pauli], truth: bool) -> String {
    let s: String = letters.iter().map(|p| p.as_char()).collect();
    format!("{s} = {}", if truth { "+1" } else { "-1" })
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.letters, self.truth))
    }
}

/// Parses `"<letters> = <+1|-1>"`, e.g. `"ZZ = -1"`. Whitespace is ignored
/// and letters are case-insensitive.
impl FromStr for Proposition {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let syntax = |reason: &str| Error::PropositionSyntax {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let (lhs, rhs) = compact
            .split_once('=')
            .ok_or_else(|| syntax("expected '<letters> = <+1|-1>'"))?;
        let truth = match rhs {
            "+1" => true,
            "-1" => false,
            _ => return Err(syntax("value must be +1 or -1")),
        };
        if lhs.is_empty() {
            return Err(syntax("missing Pauli letters"));
        }
        let letters = lhs
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| syntax("letters must be I, X, Y or Z")))
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters, truth).map_err(|e| syntax(&e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Symplectic {
    x: u64,
    z: u64,
}

impl Symplectic {
    fn is_identity(self) -> bool {
        self.x == 0 && self.z == 0
    }

    fn xor(self, o: Self) -> Self {
        Self {
            x: self.x ^ o.x,
            z: self.z ^ o.z,
        }
    }
}

/// An ordered collection of propositions over the same number of systems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropositionSet {
    num_systems: usize,
    propositions: Vec<Proposition>,
}

impl PropositionSet {
    /// All propositions must address the same number of systems.
    pub fn new(propositions: Vec<Proposition>) -> Result<Self> {
        let Some(first) = propositions.first() else {
            return Err(Error::InvalidArgument("empty proposition set".into()));
        };
        let num_systems = first.num_systems();
        if let Some(bad) = propositions.iter().find(|p| p.num_systems() != num_systems) {
            return Err(Error::DimensionMismatch {
                expected: num_systems,
                found: bad.num_systems(),
            });
        }
        Ok(Self {
            num_systems,
            propositions,
        })
    }

    /// One proposition per line or comma-separated item; blank items and
    /// `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let props = text
            .lines()
            .map(|line| line.split('#').next().unwrap_or(""))
            .flat_map(|line| line.split(','))
            .filter(|item| !item.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Proposition>>>()?;
        Self::new(props)
    }

    pub fn num_systems(&self) -> usize {
        self.num_systems
    }

    pub fn propositions(&self) -> &[Proposition] {
        &self.propositions
    }

    pub fn len(&self) -> usize {
        self.propositions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.propositions.is_empty()
    }
}

/// Outcome of [`check_set`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SetReport {
    Ok,
    NonCommuting { first: usize, second: usize },
    Dependent { indices: Vec<usize> },
    WrongCount { expected: usize, found: usize },
}

impl SetReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, Self::Ok)
    }
}

impl fmt::Display for SetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ok => f.write_str("ok"),
            Self::NonCommuting { first, second } => {
                write!(f, "propositions {first} and {second} do not commute")
            }
            Self::Dependent { indices } => {
                write!(f, "propositions {indices:?} multiply to ±identity")
            }
            Self::WrongCount { expected, found } => write!(
                f,
                "{expected} systems carry {expected} bits but {found} propositions were given"
            ),
        }
    }
}

/// Checks the set in order: pairwise commutation, independence, then count.
///
/// Over-full sets always fail one of the first two checks, so the count rule
/// only fires for under-determined sets.
pub fn check_set(ps: &PropositionSet) -> SetReport {
    let props = ps.propositions();
    for i in 0..props.len() {
        for j in (i + 1)..props.len() {
            if !props[i].commutes_with(&props[j]) {
                return SetReport::NonCommuting {
                    first: i,
                    second: j,
                };
            }
        }
    }
    let dependent = if props.len() <= EXHAUSTIVE_LIMIT {
        dependent_subset_exhaustive(props)
    } else {
        dependent_subset_elimination(props)
    };
    if let Some(indices) = dependent {
        return SetReport::Dependent { indices };
    }
    if props.len() != ps.num_systems() {
        return SetReport::WrongCount {
            expected: ps.num_systems(),
            found: props.len(),
        };
    }
    SetReport::Ok
}

/// Smallest (then lexicographically first) subset whose product is ±I.
pub(crate) fn dependent_subset_exhaustive(props: &[Proposition]) -> Option<Vec<usize>> {
    let enc: Vec<Symplectic> = props.iter().map(Proposition::symplectic).collect();
    let m = enc.len();
    for size in 1..=m as u32 {
        for mask in 1u64..(1 << m) {
            if mask.count_ones() != size {
                continue;
            }
            let prod = (0..m)
                .filter(|i| mask >> i & 1 == 1)
                .fold(Symplectic::default(), |acc, i| acc.xor(enc[i]));
            if prod.is_identity() {
                return Some((0..m).filter(|i| mask >> i & 1 == 1).collect());
            }
        }
    }
    None
}

/// Gaussian elimination over GF(2); returns the first dependency found while
/// inserting propositions in order.
pub(crate) fn dependent_subset_elimination(props: &[Proposition]) -> Option<Vec<usize>> {
    // (vector, combination of original indices)
    let mut basis: Vec<(Symplectic, Vec<bool>)> = Vec::new();
    for (i, p) in props.iter().enumerate() {
        let mut v = p.symplectic();
        let mut combo = vec![false; props.len()];
        combo[i] = true;
        for (b, bc) in &basis {
            if pivot(*b).is_some_and(|bit| has_bit(v, bit)) {
                v = v.xor(*b);
                combo.iter_mut().zip(bc).for_each(|(c, d)| *c ^= d);
            }
        }
        if v.is_identity() {
            return Some(combo.iter().enumerate().filter(|(_, &c)| c).map(|(k, _)| k).collect());
        }
        // keep the basis fully reduced on its pivot columns
        let bit = pivot(v).expect("nonzero");
        for (b, bc) in basis.iter_mut() {
            if has_bit(*b, bit) {
                *b = b.xor(v);
                bc.iter_mut().zip(&combo).for_each(|(c, d)| *c ^= d);
            }
        }
        basis.push((v, combo));
    }
    None
}

fn pivot(v: Symplectic) -> Option<u32> {
    if v.x != 0 {
        Some(v.x.trailing_zeros())
    } else if v.z != 0 {
        Some(64 + v.z.trailing_zeros())
    } else {
        None
    }
}

fn has_bit(v: Symplectic, bit: u32) -> bool {
    if bit < 64 {
        v.x >> bit & 1 == 1
    } else {
        v.z >> (bit - 64) & 1 == 1
    }
}

/// Dense Pauli-string observable; Hermitian and squaring to identity.
pub fn proposition_operator(p: &Proposition) -> Operator {
    let op = p
        .letters()
        .iter()
        .skip(1)
        .fold(p.letters()[0].operator(), |acc, l| acc.kron(&l.operator()));
    op.with_kind(OperatorKind::Hermitian)
        .expect("Pauli strings are Hermitian")
}

/// `S·amps` for the Pauli string of `p`, without building the dense matrix.
fn apply_pauli_string(amps: &[C64], p: &Proposition) -> Vec<C64> {
    let n = p.num_systems();
    let mut flip = 0usize;
    let mut phase_mask = 0usize;
    let mut y_count = 0u32;
    for (site, letter) in p.letters().iter().enumerate() {
        let m = site_mask(n, site);
        match letter {
            Pauli::I => {}
            Pauli::X => flip |= m,
            Pauli::Z => phase_mask |= m,
            Pauli::Y => {
                flip |= m;
                phase_mask |= m;
                y_count += 1;
            }
        }
    }
    // Y = i·X·Z, so Y|b⟩ = i(−1)^b |1−b⟩
    let global = C64::i().powu(y_count);
    let mut out = vec![C64::new(0.0, 0.0); amps.len()];
    for (b, a) in amps.iter().enumerate() {
        let sign = if (b & phase_mask).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        out[b ^ flip] = a * global * sign;
    }
    out
}

/// `Π_i (I + t_i S_i)/2 · v`.
fn apply_set_projector(ps: &PropositionSet, mut v: Vec<C64>) -> Vec<C64> {
    for p in ps.propositions() {
        let sv = apply_pauli_string(&v, p);
        let t = p.eigenvalue();
        v.iter_mut()
            .zip(&sv)
            .for_each(|(a, b)| *a = 0.5 * (*a + b * t));
    }
    v
}

/// The unique (up to global phase) joint eigenstate of a valid set.
///
/// Builds the columns of `P = Π_i (I + t_i S_i)/2`, certifies `Tr P = 1`
/// (rank one), and normalizes the first column whose norm exceeds `1e-8`.
pub fn state_from_propositions(ps: &PropositionSet) -> Result<StateVector> {
    let report = check_set(ps);
    if !report.is_ok() {
        return Err(Error::Inconsistent(report.to_string()));
    }
    let dim = 1usize << ps.num_systems();
    let mut trace = 0.0;
    let mut chosen: Option<Vec<C64>> = None;
    for j in 0..dim {
        let mut e = vec![C64::new(0.0, 0.0); dim];
        e[j] = C64::new(1.0, 0.0);
        let col = apply_set_projector(ps, e);
        trace += col[j].re;
        if chosen.is_none() {
            let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > COLUMN_FLOOR {
                chosen = Some(col);
            }
        }
    }
    if (trace - 1.0).abs() > RANK_TOL {
        return Err(Error::RankError(trace));
    }
    let col = chosen.ok_or(Error::RankError(trace))?;
    StateVector::normalized(ps.num_systems(), col)
}

/// Column `j` of the set projector, normalized; `None` when it vanishes.
pub fn projector_column(ps: &PropositionSet, j: usize) -> Option<StateVector> {
    let dim = 1usize << ps.num_systems();
    if j >= dim {
        return None;
    }
    let mut e = vec![C64::new(0.0, 0.0); dim];
    e[j] = C64::new(1.0, 0.0);
    let col = apply_set_projector(ps, e);
    let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (norm > COLUMN_FLOOR)
        .then(|| StateVector::normalized(ps.num_systems(), col).ok())
        .flatten()
}

/// Probability that measuring `p`'s observable on `s` yields `+1`:
/// `⟨s|(I + S)/2|s⟩`. The proposition's asserted truth value is not used.
pub fn truth_probability(s: &StateVector, p: &Proposition) -> Result<f64> {
    if s.num_systems() != p.num_systems() {
        return Err(Error::DimensionMismatch {
            expected: s.num_systems(),
            found: p.num_systems(),
        });
    }
    let sv = apply_pauli_string(s.amplitudes(), p);
    let mean: C64 = s.amplitudes().iter().zip(&sv).map(|(a, b)| a.conj() * b).sum();
    Ok((0.5 * (1.0 + mean.re)).clamp(0.0, 1.0))
}

/// Whether a set's bits describe single sites, joint properties, or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyKind {
    Individual,
    Joint,
    Mixed,
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Individual => "individual",
            Self::Joint => "joint",
            Self::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: PropertyKind,
    pub entangled: bool,
}

/// Classifies a valid set. `entangled` is true iff some single-site reduced
/// state of the constructed state has purity below `1 − 1e-10`.
pub fn classify_set(ps: &PropositionSet) -> Result<Classification> {
    let state = state_from_propositions(ps)?;
    let single = ps.propositions().iter().filter(|p| p.weight() == 1).count();
    let kind = if single == ps.len() {
        PropertyKind::Individual
    } else if single == 0 {
        PropertyKind::Joint
    } else {
        PropertyKind::Mixed
    };
    let mut entangled = false;
    for site in 0..state.num_systems() {
        if state.partial_trace(&[site])?.purity() < 1.0 - CHAINED_TOL {
            entangled = true;
            break;
        }
    }
    Ok(Classification { kind, entangled })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::fidelity;

    fn set(text: &str) -> PropositionSet {
        PropositionSet::parse(text).unwrap()
    }

    fn epr() -> StateVector {
        StateVector::from_real(&[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn parse_grammar() {
        let p: Proposition = " z z =  -1 ".parse().unwrap();
        assert_eq!(p.letters(), &[Pauli::Z, Pauli::Z]);
        assert!(!p.truth());
        assert_eq!(p.to_string(), "ZZ = -1");
        let q: Proposition = "yY=+1".parse().unwrap();
        assert!(q.truth());
        for bad in ["ZZ", "ZZ = 1", "AB = +1", "= +1", "II = +1", "ZZ = +2"] {
            assert!(bad.parse::<Proposition>().is_err(), "{bad}");
        }
    }

    #[test]
    fn parse_set_lines_and_commas() {
        let ps = set("ZZ = -1\n# joint\nYY = +1");
        assert_eq!(ps.len(), 2);
        assert_eq!(set("ZZ=-1,YY=+1"), ps);
        assert!(PropositionSet::parse("Z=+1, ZZ=+1").is_err());
        assert!(PropositionSet::parse("  \n").is_err());
    }

    #[test]
    fn operator_examples() {
        let zi = proposition_operator(&"ZI = +1".parse().unwrap());
        assert!(zi.max_deviation(&Operator::pauli_z().kron(&Operator::identity(1))) < 1e-15);
        let zz = proposition_operator(&"ZZ = -1".parse().unwrap());
        let out = epr().expectation(&zz, &[0, 1]).unwrap();
        assert!((out.re + 1.0).abs() < 1e-12);
        let yy = proposition_operator(&"YY = +1".parse().unwrap());
        assert!((epr().expectation(&yy, &[0, 1]).unwrap().re - 1.0).abs() < 1e-12);
        let sq = yy.matmul(&yy);
        assert!(sq.max_deviation(&Operator::identity(2)) < 1e-15);
    }

    #[test]
    fn check_set_examples() {
        assert_eq!(check_set(&set("ZI=+1, IZ=-1")), SetReport::Ok);
        assert_eq!(
            check_set(&set("Z=+1, X=+1")),
            SetReport::NonCommuting { first: 0, second: 1 }
        );
        assert_eq!(check_set(&set("ZZ=-1, YY=+1")), SetReport::Ok);
        assert_eq!(
            check_set(&set("ZZ=-1")),
            SetReport::WrongCount { expected: 2, found: 1 }
        );
        assert_eq!(
            check_set(&set("ZI=+1, IZ=+1, ZZ=+1")),
            SetReport::Dependent { indices: vec![0, 1, 2] }
        );
        assert_eq!(
            check_set(&set("ZZ=+1, ZZ=-1")),
            SetReport::Dependent { indices: vec![0, 1] }
        );
    }

    #[test]
    fn state_examples() {
        let prod = state_from_propositions(&set("ZI=+1, IZ=-1")).unwrap();
        let expect = StateVector::basis(2, 0b01).unwrap();
        assert!((fidelity(&prod, &expect).unwrap() - 1.0).abs() < 1e-10);

        let e = state_from_propositions(&set("ZZ=-1, YY=+1")).unwrap();
        assert!((fidelity(&e, &epr()).unwrap() - 1.0).abs() < 1e-10);

        let z = state_from_propositions(&set("Z=+1")).unwrap();
        assert!((fidelity(&z, &StateVector::basis(1, 0).unwrap()).unwrap() - 1.0).abs() < 1e-10);

        assert!(matches!(
            state_from_propositions(&set("Z=+1, X=+1")),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn truth_probability_examples() {
        let zz: Proposition = "ZZ = -1".parse().unwrap();
        assert!(truth_probability(&epr(), &zz).unwrap().abs() < 1e-12);
        let zi: Proposition = "ZI = +1".parse().unwrap();
        assert!((truth_probability(&epr(), &zi).unwrap() - 0.5).abs() < 1e-12);
        let z: Proposition = "Z = +1".parse().unwrap();
        assert_eq!(truth_probability(&StateVector::basis(1, 0).unwrap(), &z).unwrap(), 1.0);
        assert!(matches!(
            truth_probability(&epr(), &z),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_set(&set("ZI=+1, IZ=-1")).unwrap(),
            Classification { kind: PropertyKind::Individual, entangled: false }
        );
        assert_eq!(
            classify_set(&set("ZZ=-1, YY=+1")).unwrap(),
            Classification { kind: PropertyKind::Joint, entangled: true }
        );
        assert_eq!(
            classify_set(&set("ZII=+1, IZZ=+1, IYY=+1")).unwrap(),
            Classification { kind: PropertyKind::Mixed, entangled: true }
        );
    }

    #[test]
    fn pauli_string_matches_dense_operator() {
        let s = StateVector::new(
            (0..8).map(|k| C64::new(k as f64 * 0.3 - 1.0, (k * k) as f64 * 0.1)).collect(),
        )
        .unwrap();
        for text in ["XYZ = +1", "YIY = -1", "IXI = +1", "ZZY = +1"] {
            let p: Proposition = text.parse().unwrap();
            let dense = crate::qmath::apply_raw(s.amplitudes(), 3, &proposition_operator(&p), &[0, 1, 2]);
            let fast = apply_pauli_string(s.amplitudes(), &p);
            for (a, b) in dense.iter().zip(&fast) {
                assert!((a - b).norm() < 1e-14, "{text}");
            }
        }
    }

    #[test]
    fn elimination_finds_dependency_in_large_set() {
        let ps = set("ZIIII=+1, IZIII=+1, IIZII=+1, IIIZI=+1, ZZZZI=+1");
        assert_eq!(
            check_set(&ps),
            SetReport::Dependent { indices: vec![0, 1, 2, 3, 4] }
        );
        let ok = set("ZIIII=+1, IZIII=+1, IIZII=+1, IIIZI=+1, IIIIZ=+1");
        assert_eq!(check_set(&ok), SetReport::Ok);
    }
}
