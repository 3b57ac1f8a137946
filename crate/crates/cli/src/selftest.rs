//! Seeded randomized checks exercising the library end to end.

use nahm_rat::bwpairs::{relate, BWPair, OrthogonalMatrix};
use nahm_rat::monodromy::{continue_loop, LoopSpec, SignedPermutation};
use nahm_rat::ratmaps::PartialFractions;
use nahm_rat::{CMatrix, CVector, Tolerances, C64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const CASES: usize = 20;

pub struct Check {
    name: &'static str,
    failures: Vec<String>,
}

pub struct Report {
    seed: u64,
    checks: Vec<Check>,
    pub lines: Vec<String>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures.is_empty())
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "cases": CASES, "passed": c.failures.is_empty(), "failures": c.failures }))
            .collect();
        json!({ "seed": self.seed, "checks": checks, "passed": self.all_passed() })
    }
}

fn complex(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    C64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

/// Entries at least `0.3` apart so that the poles are well separated.
fn distinct_points(rng: &mut ChaCha8Rng, k: usize) -> Vec<C64> {
    let mut pts: Vec<C64> = Vec::with_capacity(k);
    while pts.len() < k {
        let z = complex(rng, 2.0);
        if pts.iter().all(|p| (p - z).norm() > 0.3) {
            pts.push(z);
        }
    }
    pts
}

fn nonzero(rng: &mut ChaCha8Rng, k: usize) -> Vec<C64> {
    (0..k)
        .map(|_| loop {
            let z = complex(rng, 1.5);
            if z.norm() > 0.3 {
                break z;
            }
        })
        .collect()
}

fn random_orthogonal(rng: &mut ChaCha8Rng, k: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(k, k, |_, _| rng.gen_range(-1.0..1.0));
    a.qr().q()
}

fn roundtrip(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(), String> {
    let k = rng.gen_range(1..=6);
    let p = BWPair::diagonal(&distinct_points(rng, k), &nonzero(rng, k)).map_err(|e| e.to_string())?;
    let f = p.project_with(tol).map_err(|e| e.to_string())?.map;
    let lifted = BWPair::lift_distinct(&f, tol).map_err(|e| e.to_string())?;
    relate(&lifted, &p, tol).map_err(|e| format!("k = {k}: {e}"))?;
    let back = lifted.project_with(tol).map_err(|e| e.to_string())?.map;
    let d = back.coefficient_distance(&f);
    if d > 1e-8 {
        return Err(format!("k = {k}: coefficient distance {d:.3e}"));
    }
    Ok(())
}

fn equivariance(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(), String> {
    let k = rng.gen_range(1..=5);
    let mut b = CMatrix::from_fn(k, k, |_, _| complex(rng, 1.0));
    b = (&b + b.transpose()) * C64::new(0.5, 0.0);
    let w = CVector::from_vec(nonzero(rng, k));
    let p = BWPair::new(b, w).map_err(|e| e.to_string())?;
    let q = OrthogonalMatrix::new(random_orthogonal(rng, k)).map_err(|e| e.to_string())?;
    let f = p.project_with(tol).map_err(|e| e.to_string())?.map;
    let g = p.act(&q).and_then(|pq| pq.project_with(tol)).map_err(|e| e.to_string())?.map;
    let d = f.coefficient_distance(&g);
    if d > 1e-9 {
        return Err(format!("k = {k}: coefficient distance {d:.3e}"));
    }
    Ok(())
}

fn random_signed(rng: &mut ChaCha8Rng, k: usize) -> SignedPermutation {
    let mut pi: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        pi.swap(i, rng.gen_range(0..=i));
    }
    let signs = (0..k).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    SignedPermutation::new(pi, signs).expect("valid by construction")
}

fn group_laws(rng: &mut ChaCha8Rng, _tol: &Tolerances) -> Result<(), String> {
    let k = rng.gen_range(1..=6);
    let [a, b, c] = [0, 1, 2].map(|_| random_signed(rng, k));
    let lhs = a.compose(&b).and_then(|ab| ab.compose(&c)).map_err(|e| e.to_string())?;
    let rhs = b.compose(&c).and_then(|bc| a.compose(&bc)).map_err(|e| e.to_string())?;
    if lhs != rhs {
        return Err(format!("associativity fails for {a}, {b}, {c}"));
    }
    if !a.compose(&a.inverse()).map_err(|e| e.to_string())?.is_identity() {
        return Err(format!("{a} times its inverse is not the identity"));
    }
    Ok(())
}

fn winding(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<(), String> {
    let k = rng.gen_range(1..=4);
    let poles: Vec<C64> =
        (0..k).map(|j| C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / k as f64)).collect();
    let base = PartialFractions::new(poles, nonzero(rng, k)).map_err(|e| e.to_string())?;
    let i = rng.gen_range(1..=k);
    let spec = LoopSpec::wind(i, base, 16, tol).map_err(|e| e.to_string())?;
    let (g, _) = continue_loop(&spec).map_err(|e| e.to_string())?;
    if g != SignedPermutation::flip(k, i - 1) {
        return Err(format!("wind({i}) at k = {k} gave {g}"));
    }
    Ok(())
}

type CheckFn = fn(&mut ChaCha8Rng, &Tolerances) -> Result<(), String>;

pub fn run(seed: u64, tol: &Tolerances) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table: [(&'static str, CheckFn); 4] = [
        ("lift_project_roundtrip", roundtrip),
        ("orthogonal_equivariance", equivariance),
        ("signed_permutation_group", group_laws),
        ("wind_is_sign_flip", winding),
    ];
    let mut checks = Vec::new();
    let mut lines = Vec::new();
    for (name, f) in table {
        let failures: Vec<String> = (0..CASES).filter_map(|_| f(&mut rng, tol).err()).collect();
        lines.push(format!("{name}: {}/{CASES} passed", CASES - failures.len()));
        checks.push(Check { name, failures });
    }
    Report { seed, checks, lines }
}
