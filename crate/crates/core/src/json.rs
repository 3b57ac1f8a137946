//! JSON file formats. Complex scalars are two-element arrays `[re, im]`,
//! matrices are arrays of rows.
//!
//! - map: `{"k", "numerator", "denominator"}` or `{"poles", "residues"}`
//! - pair: `{"k", "B", "W"}`
//! - Nahm: `{"k", "samples": [{"s", "T1", "T2", "T3"}], "residue_minus", "residue_plus"}`
//!   with residues `{"t1", "t2", "t3", "v"?}`
//! - loop: `{"k", "base": {"poles", "residues"}, "word": [{"gen", "j"|"i", "inverse"?}], "samples"}`
//!   or with `"keyframes": [{"poles", "residues"}, ...]` in place of `"word"`
//!
//! Writers emit floating values with 17 significant digits.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bwpairs::BWPair;
use crate::monodromy::{Generator, GeneratorKind, LoopSpec, SignedPermutation};
use crate::nahm::{NahmData, SU2Residues, Triple};
use crate::ratmaps::{PartialFractions, Polynomial, RationalMap};
use crate::{CMatrix, CVector, Error, Result, Tolerances, C64, MAX_DEGREE};

type Pair = [f64; 2];

fn fmt_err(e: impl std::fmt::Display) -> Error {
    Error::Format(e.to_string())
}

fn to_c64(p: &Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn to_vec(v: &[Pair]) -> Vec<C64> {
    v.iter().map(to_c64).collect()
}

fn to_matrix(rows: &[Vec<Pair>], k: usize, what: &str) -> Result<CMatrix> {
    if rows.len() != k || rows.iter().any(|r| r.len() != k) {
        return Err(Error::Format(format!("{what} must be {k}x{k}")));
    }
    Ok(CMatrix::from_fn(k, k, |i, j| to_c64(&rows[i][j])))
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > MAX_DEGREE {
        return Err(Error::Format(format!("k = {k} outside 1..={MAX_DEGREE}")));
    }
    Ok(())
}

fn c_json(z: C64) -> Value {
    json!([z.re, z.im])
}

/// `[[re, im], ...]`.
pub fn vec_json<'a>(v: impl IntoIterator<Item = &'a C64>) -> Value {
    Value::Array(v.into_iter().map(|&z| c_json(z)).collect())
}

/// Rows of `[re, im]` pairs.
pub fn matrix_json(m: &CMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| vec_json(m.row(i).iter())).collect())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientsJson {
    k: usize,
    numerator: Vec<Pair>,
    denominator: Vec<Pair>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct PartialFractionsJson {
    poles: Vec<Pair>,
    residues: Vec<Pair>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MapJson {
    Coefficients(CoefficientsJson),
    PartialFractions(PartialFractionsJson),
}

/// A map file in either of its two forms.
#[derive(Debug, Clone, PartialEq)]
pub enum MapFile {
    Coefficients(RationalMap),
    PartialFractions(PartialFractions),
}

impl MapFile {
    pub fn to_map(&self) -> RationalMap {
        match self {
            MapFile::Coefficients(f) => f.clone(),
            MapFile::PartialFractions(pf) => pf.to_map(),
        }
    }
}

pub fn parse_map(text: &str, tol: &Tolerances) -> Result<MapFile> {
    match serde_json::from_str::<MapJson>(text).map_err(fmt_err)? {
        MapJson::Coefficients(c) => {
            check_k(c.k)?;
            let num = Polynomial::new(to_vec(&c.numerator));
            let den = Polynomial::new(to_vec(&c.denominator));
            if den.degree() != Some(c.k) {
                return Err(Error::Format(format!("k = {} but the denominator has degree {:?}", c.k, den.degree())));
            }
            Ok(MapFile::Coefficients(RationalMap::with_tolerances(num, den, tol)?))
        }
        MapJson::PartialFractions(p) => Ok(MapFile::PartialFractions(partial_fractions_from(&p, tol)?)),
    }
}

fn partial_fractions_from(p: &PartialFractionsJson, tol: &Tolerances) -> Result<PartialFractions> {
    check_k(p.poles.len())?;
    PartialFractions::with_tolerances(to_vec(&p.poles), to_vec(&p.residues), tol)
}

pub fn map_to_json(f: &RationalMap) -> Value {
    json!({
        "k": f.k(),
        "numerator": vec_json(f.numerator().coeffs()),
        "denominator": vec_json(f.denominator().coeffs()),
    })
}

pub fn partial_fractions_to_json(pf: &PartialFractions) -> Value {
    json!({ "poles": vec_json(pf.poles()), "residues": vec_json(pf.residues()) })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairJson {
    k: usize,
    #[serde(rename = "B")]
    b: Vec<Vec<Pair>>,
    #[serde(rename = "W")]
    w: Vec<Pair>,
}

pub fn parse_pair(text: &str, tol: &Tolerances) -> Result<BWPair> {
    let p: PairJson = serde_json::from_str(text).map_err(fmt_err)?;
    check_k(p.k)?;
    if p.w.len() != p.k {
        return Err(Error::Format(format!("W must have length {}", p.k)));
    }
    let b = to_matrix(&p.b, p.k, "B")?;
    BWPair::with_tolerances(b, CVector::from_vec(to_vec(&p.w)), tol)
}

pub fn pair_to_json(p: &BWPair) -> Value {
    json!({ "k": p.k(), "B": matrix_json(p.b()), "W": vec_json(p.w().iter()) })
}

pub fn permutation_to_json(g: &SignedPermutation) -> Value {
    json!({
        "pi": g.pi().iter().map(|&p| p + 1).collect::<Vec<_>>(),
        "signs": g.signs(),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResidueJson {
    t1: Vec<Vec<Pair>>,
    t2: Vec<Vec<Pair>>,
    t3: Vec<Vec<Pair>>,
    #[serde(default)]
    v: Option<Vec<Pair>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleJson {
    s: f64,
    #[serde(rename = "T1")]
    t1: Vec<Vec<Pair>>,
    #[serde(rename = "T2")]
    t2: Vec<Vec<Pair>>,
    #[serde(rename = "T3")]
    t3: Vec<Vec<Pair>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NahmJson {
    k: usize,
    samples: Vec<SampleJson>,
    residue_minus: ResidueJson,
    residue_plus: ResidueJson,
}

fn residues_from(r: &ResidueJson, k: usize) -> Result<SU2Residues> {
    let t = [to_matrix(&r.t1, k, "t1")?, to_matrix(&r.t2, k, "t2")?, to_matrix(&r.t3, k, "t3")?];
    let v = match &r.v {
        Some(v) if v.len() != k => return Err(Error::Format(format!("v must have length {k}"))),
        Some(v) => Some(CVector::from_vec(to_vec(v))),
        None => None,
    };
    SU2Residues::new(t, v)
}

pub fn parse_nahm(text: &str) -> Result<NahmData> {
    let n: NahmJson = serde_json::from_str(text).map_err(fmt_err)?;
    check_k(n.k)?;
    let rm = residues_from(&n.residue_minus, n.k)?;
    let rp = residues_from(&n.residue_plus, n.k)?;
    let samples = n
        .samples
        .iter()
        .map(|s| -> Result<(f64, Triple)> {
            Ok((s.s, [to_matrix(&s.t1, n.k, "T1")?, to_matrix(&s.t2, n.k, "T2")?, to_matrix(&s.t3, n.k, "T3")?]))
        })
        .collect::<Result<Vec<_>>>()?;
    NahmData::tabulated(samples, rm, rp)
}

fn residues_to_json(r: &SU2Residues) -> Value {
    json!({
        "t1": matrix_json(&r.t()[0]),
        "t2": matrix_json(&r.t()[1]),
        "t3": matrix_json(&r.t()[2]),
        "v": vec_json(r.v().iter()),
    })
}

/// Tabulates `data` at the given points in the Nahm file format.
pub fn nahm_to_json(data: &NahmData, points: &[f64]) -> Value {
    let samples: Vec<Value> = points
        .iter()
        .map(|&s| {
            let t = data.sample(s);
            json!({ "s": s, "T1": matrix_json(&t[0]), "T2": matrix_json(&t[1]), "T3": matrix_json(&t[2]) })
        })
        .collect();
    json!({
        "k": data.k(),
        "samples": samples,
        "residue_minus": residues_to_json(data.residue_minus()),
        "residue_plus": residues_to_json(data.residue_plus()),
    })
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct GeneratorJson {
    gen: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
    #[serde(default)]
    inverse: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LoopJson {
    k: usize,
    base: PartialFractionsJson,
    #[serde(default)]
    word: Option<Vec<GeneratorJson>>,
    #[serde(default)]
    keyframes: Option<Vec<PartialFractionsJson>>,
    samples: usize,
}

fn generator_from(g: &GeneratorJson) -> Result<Generator> {
    let kind = match (g.gen.as_str(), g.j, g.i) {
        ("braid", Some(j), None) => GeneratorKind::Braid(j),
        ("wind", None, Some(i)) => GeneratorKind::Wind(i),
        _ => return Err(Error::Format(format!("bad generator {:?}", g.gen))),
    };
    Ok(Generator { kind, inverse: g.inverse })
}

pub fn parse_loop(text: &str, tol: &Tolerances) -> Result<LoopSpec> {
    let l: LoopJson = serde_json::from_str(text).map_err(fmt_err)?;
    check_k(l.k)?;
    if l.base.poles.len() != l.k {
        return Err(Error::Format(format!("base must have {} poles", l.k)));
    }
    let base = partial_fractions_from(&l.base, tol)?;
    match (&l.word, &l.keyframes) {
        (Some(word), None) => {
            let gens = word.iter().map(generator_from).collect::<Result<Vec<_>>>()?;
            LoopSpec::word(base, &gens, l.samples, tol)
        }
        (None, Some(frames)) => {
            let frames = frames.iter().map(|f| partial_fractions_from(f, tol)).collect::<Result<Vec<_>>>()?;
            LoopSpec::keyframes(base, frames, l.samples, tol)
        }
        _ => Err(Error::Format("a loop needs exactly one of \"word\" or \"keyframes\"".into())),
    }
}

/// Serializes a generator-word loop; `None` for keyframe loops.
pub fn loop_to_json(l: &LoopSpec) -> Option<Value> {
    let word: Vec<GeneratorJson> = l
        .generator_word()?
        .into_iter()
        .map(|g| match g.kind {
            GeneratorKind::Braid(j) => GeneratorJson { gen: "braid".into(), j: Some(j), i: None, inverse: g.inverse },
            GeneratorKind::Wind(i) => GeneratorJson { gen: "wind".into(), j: None, i: Some(i), inverse: g.inverse },
        })
        .collect();
    Some(json!({
        "k": l.k(),
        "base": partial_fractions_to_json(l.base()),
        "word": serde_json::to_value(word).ok()?,
        "samples": l.samples(),
    }))
}

/// Source of Nahm data named on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum NahmSpec {
    K1([f64; 3]),
    K2(f64),
    File(String),
}

/// `k1:c1,c2,c3`, `k2:m`, or anything else as a file path.
pub fn parse_nahm_spec(text: &str) -> Result<NahmSpec> {
    let num = |s: &str| -> Result<f64> {
        let x: f64 = s.trim().parse().map_err(|_| Error::Format(format!("bad number {s:?}")))?;
        if !x.is_finite() {
            return Err(Error::Format(format!("non-finite number {s:?}")));
        }
        Ok(x)
    };
    if let Some(rest) = text.strip_prefix("k1:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Format("k1 needs three comma-separated values".into()));
        }
        return Ok(NahmSpec::K1([num(parts[0])?, num(parts[1])?, num(parts[2])?]));
    }
    if let Some(rest) = text.strip_prefix("k2:") {
        return Ok(NahmSpec::K2(num(rest)?));
    }
    if text.is_empty() {
        return Err(Error::Format("empty Nahm specification".into()));
    }
    Ok(NahmSpec::File(text.to_string()))
}

impl NahmSpec {
    /// Builds the data; `read` loads the file variant.
    pub fn load(&self, read: impl FnOnce(&str) -> io::Result<String>) -> Result<NahmData> {
        match self {
            NahmSpec::K1(c) => Ok(NahmData::builtin_k1(*c)),
            NahmSpec::K2(m) => NahmData::builtin_k2(*m),
            NahmSpec::File(path) => parse_nahm(&read(path).map_err(|e| Error::Format(format!("{path}: {e}")))?),
        }
    }
}

/// Writes `f64` values with 17 significant digits, both zeros as `0`.
struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value == 0.0 {
            w.write_all(b"0")
        } else if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Compact JSON with 17-significant-digit floats.
pub fn to_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    v.serialize(&mut ser).expect("serializing a Value into memory cannot fail");
    String::from_utf8(buf).expect("JSON output is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn coefficient_map() {
        let f = parse_map(r#"{"k":1,"numerator":[[1,0]],"denominator":[[0,0],[1,0]]}"#, &tol()).unwrap();
        assert_eq!(f.to_map().k(), 1);
        assert!(matches!(
            parse_map(r#"{"k":2,"numerator":[[1,0]],"denominator":[[0,0],[1,0]]}"#, &tol()),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn partial_fraction_map_errors_are_domain_errors() {
        let e = parse_map(r#"{"poles":[[0,0],[0,0]],"residues":[[1,0],[1,0]]}"#, &tol()).unwrap_err();
        assert_eq!(e.name(), "RepeatedPoles");
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["", "{", "[]", r#"{"k":1}"#, r#"{"k":1,"B":[[[0,0]]],"W":[[1,0]],"x":1}"#, r#"{"k":1,"B":[[[0]]],"W":[[1,0]]}"#] {
            assert!(parse_pair(bad, &tol()).unwrap_err().is_format(), "{bad}");
        }
        assert!(parse_pair(r#"{"k":100000,"B":[],"W":[]}"#, &tol()).unwrap_err().is_format());
    }

    #[test]
    fn pair_roundtrip() {
        let p = parse_pair(r#"{"k":2,"B":[[[1,0],[0,0]],[[0,0],[-1,0]]],"W":[[1,0],[1,0]]}"#, &tol()).unwrap();
        let text = to_string(&pair_to_json(&p));
        assert_eq!(parse_pair(&text, &tol()).unwrap(), p);
    }

    #[test]
    fn seventeen_digit_output() {
        assert_eq!(to_string(&json!([0.1, 1, -2.5, -0.0])), "[1.0000000000000001e-1,1,-2.5000000000000000e0,0]");
        let x = 0.1 + 0.2;
        let back: f64 = serde_json::from_str(&to_string(&json!(x))).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn nahm_specs() {
        assert_eq!(parse_nahm_spec("k1:1,2,3").unwrap(), NahmSpec::K1([1.0, 2.0, 3.0]));
        assert_eq!(parse_nahm_spec("k2:0.5").unwrap(), NahmSpec::K2(0.5));
        assert_eq!(parse_nahm_spec("data.json").unwrap(), NahmSpec::File("data.json".into()));
        assert!(parse_nahm_spec("k1:1,2").is_err());
        assert!(parse_nahm_spec("k2:nan").is_err());
    }

    #[test]
    fn loop_file() {
        let text = r#"{"k":2,"base":{"poles":[[1,0],[-1,0]],"residues":[[1,0],[1,0]]},
            "word":[{"gen":"braid","j":1},{"gen":"wind","i":2,"inverse":true}],"samples":16}"#;
        let l = parse_loop(text, &tol()).unwrap();
        assert_eq!(l.generator_word().unwrap(), vec![Generator::braid(1), Generator::wind(2).inverted()]);
        let again = parse_loop(&to_string(&loop_to_json(&l).unwrap()), &tol()).unwrap();
        assert_eq!(again, l);
        let bad = r#"{"k":2,"base":{"poles":[[1,0],[-1,0]],"residues":[[1,0],[1,0]]},"word":[{"gen":"twist","j":1}],"samples":4}"#;
        assert!(parse_loop(bad, &tol()).unwrap_err().is_format());
    }

    #[test]
    fn nahm_file_roundtrip() {
        let data = NahmData::builtin_k2(0.3).unwrap();
        let grid: Vec<f64> = (0..41).map(|j| -0.95 + 0.0475 * j as f64).collect();
        let text = to_string(&nahm_to_json(&data, &grid));
        let tab = parse_nahm(&text).unwrap();
        for s in [-0.9, 0.05, 0.93] {
            let (a, b) = (data.sample(s), tab.sample(s));
            for i in 0..3 {
                assert!((&a[i] - &b[i]).norm() < 1e-5 * a[i].norm().max(1.0), "s={s}");
            }
        }
    }
}
