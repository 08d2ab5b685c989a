//! Problem instances: seeded random ones, named generators, coefficient
//! files and symbolic encodings.

use std::collections::BTreeMap;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_rational, rational, Monomial, Rational, RingElem, Scalar};
use crate::error::{Error, Result};
use crate::recurrences::{AffineVectorProblem, FullHistoryProblem, IndexedSeq, Order2Problem};
use crate::vector::{BitWord, RowVec};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Independent stream for one case: depends only on `(seed, case_index, shape)`.
pub fn case_rng(seed: u64, case_index: u64, shape: &str) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(seed ^ fnv1a(shape)) ^ case_index);
    ChaCha8Rng::seed_from_u64(key)
}

/// Numerator in `[-9, 9]`, denominator in `[1, 9]`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    rational(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

/// Small random element of the `(x, λ)` ring, zero to three terms.
pub fn small_ring_elem<R: Rng>(rng: &mut R) -> RingElem {
    let terms = rng.gen_range(0..=3);
    RingElem::from_terms(
        (0..terms).map(|_| (Monomial::new(rng.gen_range(0..=2), rng.gen_range(-1..=2)), small_rational(rng))),
    )
}

pub fn random_order2<R: Rng>(rng: &mut R, n_max: u64, with_c: bool) -> Order2Problem<Rational> {
    let x1 = small_rational(rng);
    let x2 = small_rational(rng);
    let a = IndexedSeq::from_fn(3, n_max, |_| small_rational(rng));
    let b = IndexedSeq::from_fn(3, n_max, |_| small_rational(rng));
    let c = with_c.then(|| IndexedSeq::from_fn(3, n_max, |_| small_rational(rng)));
    Order2Problem { x1, x2, a, b, c }
}

pub fn random_full_history<R: Rng>(rng: &mut R, n_max: usize, with_c: bool) -> FullHistoryProblem<Rational> {
    let w0 = small_rational(rng);
    let a = (1..=n_max).map(|n| (0..n).map(|_| small_rational(rng)).collect()).collect();
    let c = with_c.then(|| IndexedSeq::from_fn(1, n_max as u64, |_| small_rational(rng)));
    FullHistoryProblem { w0, a, c }
}

/// Random affine vector problem with `|b_i| ≤ 3`; at least one `b` word
/// contains a zero whenever `n_max ≥ 2`.
pub fn random_affine<R: Rng>(rng: &mut R, n_max: usize) -> AffineVectorProblem<Rational> {
    let dim0 = rng.gen_range(1..=3);
    let x1 = RowVec::new((0..dim0).map(|_| small_rational(rng)).collect());
    let mut words: Vec<Vec<u8>> = (2..=n_max)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            (0..len).map(|_| rng.gen_range(0..=1)).collect()
        })
        .collect();
    if !words.is_empty() && words.iter().all(|w| !w.contains(&0)) {
        let i = rng.gen_range(0..words.len());
        let j = rng.gen_range(0..words[i].len());
        words[i][j] = 0;
    }
    let mut dim = dim0;
    let mut a = Vec::new();
    let mut c = Vec::new();
    for w in &words {
        dim *= w.len();
        a.push(RowVec::new((0..dim).map(|_| small_rational(rng)).collect()));
        c.push(RowVec::new((0..dim).map(|_| small_rational(rng)).collect()));
    }
    let b = words.into_iter().map(|w| BitWord::new(w).expect("0/1")).collect();
    AffineVectorProblem { x1, b, a, c }
}

/// A seeded random instance, as produced for one suite case.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Order2(Order2Problem<Rational>),
    FullHistory(FullHistoryProblem<Rational>),
    Affine(AffineVectorProblem<Rational>),
}

/// Deterministic instance for `(seed, case_index, shape)`; the shape is a
/// suite name and fixes the problem kind and size.
pub fn random_instance(seed: u64, case_index: u64, shape: &str) -> Result<Instance> {
    let mut rng = case_rng(seed, case_index, shape);
    Ok(match shape {
        "thm1" => Instance::Order2(random_order2(&mut rng, 18, false)),
        "thm2" => Instance::Order2(random_order2(&mut rng, 16, false)),
        "nonhom2" => Instance::Order2(random_order2(&mut rng, 12, true)),
        "thm3" => Instance::FullHistory(random_full_history(&mut rng, 14, false)),
        "nonhomfull" => Instance::FullHistory(random_full_history(&mut rng, 12, true)),
        "lemma1" => Instance::Affine(random_affine(&mut rng, 6)),
        other => return Err(Error::UnknownSuite(other.to_string())),
    })
}

/// Symbol names for the Kronecker-substitution encoding: symbol `s` is
/// carried as `λ^{2^s}`. Every monomial of a multilinear expression in the
/// symbols then has a distinct `λ` exponent, so ring equality is identity of
/// the symbolic expressions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolTable {
    pub names: Vec<String>,
}

impl SymbolTable {
    pub fn push(&mut self, name: impl Into<String>) -> RingElem {
        let s = self.names.len();
        assert!(s < 62, "too many symbols");
        self.names.push(name.into());
        RingElem::lambda_pow(1i64 << s)
    }

    /// `name` as the ring element it is encoded by.
    pub fn get(&self, name: &str) -> Option<RingElem> {
        self.names.iter().position(|n| n == name).map(|s| RingElem::lambda_pow(1i64 << s))
    }

    /// Decodes an element into `monomial → coefficient`, where a monomial is
    /// the `*`-joined sorted symbol names (`"1"` for the empty product).
    pub fn decode(&self, value: &RingElem) -> Result<BTreeMap<String, Rational>> {
        let mut out = BTreeMap::new();
        for (m, c) in value.terms() {
            if m.x != 0 || m.lambda < 0 || m.lambda >> self.names.len() != 0 {
                return Err(Error::Parse(format!("term {m:?} is not a symbolic monomial")));
            }
            let mut names: Vec<&str> =
                (0..self.names.len()).filter(|s| m.lambda >> s & 1 == 1).map(|s| self.names[s].as_str()).collect();
            names.sort_unstable();
            let key = if names.is_empty() { "1".to_string() } else { names.join("*") };
            out.insert(key, c.clone());
        }
        Ok(out)
    }
}

/// Second-order problem whose entries are independent symbols.
pub fn symbolic_order2(n_max: u64, with_c: bool) -> (Order2Problem<RingElem>, SymbolTable) {
    let mut t = SymbolTable::default();
    let x1 = t.push("x1");
    let x2 = t.push("x2");
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut c = Vec::new();
    for k in 3..=n_max {
        a.push(t.push(format!("a{k}")));
        b.push(t.push(format!("b{k}")));
        if with_c {
            c.push(t.push(format!("c{k}")));
        }
    }
    let p = Order2Problem {
        x1,
        x2,
        a: IndexedSeq::new(3, a),
        b: IndexedSeq::new(3, b),
        c: with_c.then(|| IndexedSeq::new(3, c)),
    };
    (p, t)
}

/// Full-history problem whose entries are independent symbols.
pub fn symbolic_full_history(n_max: usize) -> (FullHistoryProblem<RingElem>, SymbolTable) {
    let mut t = SymbolTable::default();
    let w0 = t.push("w0");
    let a = (1..=n_max).map(|n| (0..n).map(|j| t.push(format!("a{n}_{j}"))).collect()).collect();
    (FullHistoryProblem { w0, a, c: None }, t)
}

/// Coefficient file: `{"x1": "p/q", "x2": …, "a": {"3": …}, "b": {…}, "c": {…}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffFile {
    pub x1: String,
    pub x2: String,
    pub a: BTreeMap<String, String>,
    pub b: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<BTreeMap<String, String>>,
}

fn seq_from_map(name: &str, map: &BTreeMap<String, String>) -> Result<IndexedSeq<Rational>> {
    let mut entries: Vec<(u64, Rational)> = map
        .iter()
        .map(|(k, v)| {
            let idx: u64 = k.parse().map_err(|_| Error::Parse(format!("bad index `{k}` in {name}")))?;
            Ok((idx, parse_rational(v)?))
        })
        .collect::<Result<_>>()?;
    entries.sort_by_key(|(k, _)| *k);
    for (offset, (k, _)) in entries.iter().enumerate() {
        if *k != 3 + offset as u64 {
            return Err(Error::Parse(format!("{name} must be indexed contiguously from 3")));
        }
    }
    Ok(IndexedSeq::new(3, entries.into_iter().map(|(_, v)| v).collect()))
}

fn seq_to_map<T: Scalar>(seq: &IndexedSeq<T>) -> BTreeMap<String, String> {
    seq.values.iter().enumerate().map(|(i, v)| ((seq.start + i as u64).to_string(), v.render())).collect()
}

impl CoeffFile {
    pub fn to_problem(&self) -> Result<Order2Problem<Rational>> {
        Ok(Order2Problem {
            x1: parse_rational(&self.x1)?,
            x2: parse_rational(&self.x2)?,
            a: seq_from_map("a", &self.a)?,
            b: seq_from_map("b", &self.b)?,
            c: self.c.as_ref().map(|c| seq_from_map("c", c)).transpose()?,
        })
    }

    pub fn from_problem<T: Scalar>(p: &Order2Problem<T>) -> CoeffFile {
        CoeffFile {
            x1: p.x1.render(),
            x2: p.x2.render(),
            a: seq_to_map(&p.a),
            b: seq_to_map(&p.b),
            c: p.c.as_ref().map(seq_to_map),
        }
    }
}

/// Named generator (`ones`, `index`, `random:SEED`, `symbolic`) lifted into
/// the ring, covering indices up to `n_max`.
pub fn generate_order2(name: &str, n_max: u64, with_c: bool) -> Result<Order2Problem<RingElem>> {
    let lift = |p: Order2Problem<Rational>| Order2Problem {
        x1: RingElem::constant(p.x1),
        x2: RingElem::constant(p.x2),
        a: p.a.map(|v| RingElem::constant(v.clone())),
        b: p.b.map(|v| RingElem::constant(v.clone())),
        c: p.c.map(|c| c.map(|v| RingElem::constant(v.clone()))),
    };
    let n_max = n_max.max(3);
    match name {
        "ones" => {
            let one = Rational::one();
            let seq = IndexedSeq::from_fn(3, n_max, |_| one.clone());
            Ok(lift(Order2Problem {
                x1: one.clone(),
                x2: one.clone(),
                a: seq.clone(),
                b: seq.clone(),
                c: with_c.then(|| seq.clone()),
            }))
        }
        "index" => {
            let seq = IndexedSeq::from_fn(3, n_max, |k| Rational::from_integer(k.into()));
            Ok(lift(Order2Problem {
                x1: Rational::one(),
                x2: rational(2, 1),
                a: seq.clone(),
                b: seq.clone(),
                c: with_c.then(|| seq.clone()),
            }))
        }
        "symbolic" => Ok(symbolic_order2(n_max, with_c).0),
        other => match other.strip_prefix("random:") {
            Some(seed) => {
                let seed: u64 = seed.parse().map_err(|_| Error::Parse(format!("bad seed `{seed}`")))?;
                let mut rng = case_rng(seed, 0, "gen");
                Ok(lift(random_order2(&mut rng, n_max, with_c)))
            }
            None => Err(Error::Parse(format!("unknown generator `{other}`"))),
        },
    }
}

/// Named generator for full-history problems, lifted into the ring.
pub fn generate_full_history(name: &str, n_max: usize, with_c: bool) -> Result<FullHistoryProblem<RingElem>> {
    let lift = |p: FullHistoryProblem<Rational>| FullHistoryProblem {
        w0: RingElem::constant(p.w0),
        a: p.a.iter().map(|row| row.iter().map(|v| RingElem::constant(v.clone())).collect()).collect(),
        c: p.c.map(|c| c.map(|v| RingElem::constant(v.clone()))),
    };
    match name {
        "ones" => {
            let one = Rational::one();
            Ok(lift(FullHistoryProblem {
                w0: one.clone(),
                a: (1..=n_max).map(|n| vec![one.clone(); n]).collect(),
                c: with_c.then(|| IndexedSeq::from_fn(1, n_max as u64, |_| one.clone())),
            }))
        }
        "symbolic" if !with_c => Ok(symbolic_full_history(n_max).0),
        other => match other.strip_prefix("random:") {
            Some(seed) => {
                let seed: u64 = seed.parse().map_err(|_| Error::Parse(format!("bad seed `{seed}`")))?;
                let mut rng = case_rng(seed, 0, "gen-full-history");
                Ok(lift(random_full_history(&mut rng, n_max, with_c)))
            }
            None => Err(Error::Parse(format!("unknown generator `{other}`"))),
        },
    }
}

/// Instance description for mismatch records.
pub fn describe_order2<T: Scalar>(p: &Order2Problem<T>) -> serde_json::Value {
    serde_json::to_value(CoeffFile::from_problem(p)).expect("plain strings")
}

pub fn describe_full_history<T: Scalar>(p: &FullHistoryProblem<T>) -> serde_json::Value {
    serde_json::json!({
        "w0": p.w0.render(),
        "a": p.a.iter().map(|row| row.iter().map(Scalar::render).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "c": p.c.as_ref().map(|c| c.values.iter().map(Scalar::render).collect::<Vec<_>>()),
    })
}

pub fn describe_affine<T: Scalar>(p: &AffineVectorProblem<T>) -> serde_json::Value {
    let render = |v: &RowVec<T>| v.iter().map(Scalar::render).collect::<Vec<_>>();
    serde_json::json!({
        "x1": render(&p.x1),
        "b": p.b.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "a": p.a.iter().map(render).collect::<Vec<_>>(),
        "c": p.c.iter().map(render).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible() {
        let a = random_instance(42, 0, "thm1").unwrap();
        let b = random_instance(42, 0, "thm1").unwrap();
        let c = random_instance(42, 1, "thm1").unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(random_instance(42, 0, "thm2").unwrap(), a);
        assert!(matches!(random_instance(1, 0, "nope"), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn rationals_stay_small() {
        let mut rng = case_rng(7, 3, "x");
        for _ in 0..500 {
            let r = small_rational(&mut rng);
            let n = r.numer().clone();
            assert!(n >= (-9).into() && n <= 9.into());
            assert!(r.denom() >= &1.into() && r.denom() <= &9.into());
        }
    }

    #[test]
    fn affine_instances_contain_zero_bits() {
        for case in 0..50 {
            let mut rng = case_rng(1, case, "lemma1");
            let p = random_affine(&mut rng, 6);
            assert!(p.b.iter().any(|w| w.bits().contains(&0)));
            assert!(p.b.iter().all(|w| (1..=3).contains(&w.len())));
        }
    }

    #[test]
    fn symbolic_decoding() {
        let (p, t) = symbolic_order2(3, false);
        let expr = &(p.a.values[0].clone() * &p.x2) + &(p.b.values[0].clone() * &p.x1);
        let decoded = t.decode(&expr).unwrap();
        let keys: Vec<&str> = decoded.keys().map(String::as_str).collect();
        assert_eq!(keys, vec!["a3*x2", "b3*x1"]);
        assert_eq!(t.get("b3"), Some(p.b.values[0].clone()));
        assert!(t.decode(&RingElem::x()).is_err());
    }

    #[test]
    fn coefficient_file_round_trip() {
        let mut rng = case_rng(5, 0, "file");
        let p = random_order2(&mut rng, 6, true);
        let file = CoeffFile::from_problem(&p);
        let text = serde_json::to_string(&file).unwrap();
        let back: CoeffFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_problem().unwrap(), p);
        let mut gap = file.clone();
        gap.a.remove("4");
        assert!(gap.to_problem().is_err());
    }

    #[test]
    fn named_generators() {
        let p = generate_order2("ones", 5, false).unwrap();
        assert_eq!(p.a.values.len(), 3);
        assert!(generate_order2("random:9", 5, true).unwrap().c.is_some());
        assert!(generate_order2("random:x", 5, true).is_err());
        assert!(generate_order2("bogus", 5, true).is_err());
        assert_eq!(generate_order2("index", 4, false).unwrap().a.values[1], RingElem::from_int(4));
    }
}
