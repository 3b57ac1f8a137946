use super::elliptic::{complete_k, jacobi_elliptic};
use super::residues::{su2_residues, SU2Residues};
use crate::{linalg, CMatrix, Error, Result, C64, MAX_DEGREE};

pub type Triple = [CMatrix; 3];

#[derive(Debug, Clone, PartialEq)]
pub enum NahmKind {
    /// Constant scalars `T_j = -(i/2) c_j`.
    BuiltinK1 { c: [f64; 3] },
    /// Euler-top solution `T_j = (i/2) f_j(s) sigma_j` with quarter period `d = K(m)`.
    BuiltinK2 { m: f64, d: f64 },
    Tabulated(Tabulated),
}

/// Nahm matrices `T_1, T_2, T_3` on `(-1, 1)` with declared residues at
/// both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct NahmData {
    k: usize,
    kind: NahmKind,
    residue_minus: SU2Residues,
    residue_plus: SU2Residues,
}

fn pauli() -> Triple {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        CMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        CMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    ]
}

impl NahmData {
    /// For `k = 1` all commutators vanish, so Nahm's equations force constants.
    pub fn builtin_k1(c: [f64; 3]) -> Self {
        NahmData {
            k: 1,
            kind: NahmKind::BuiltinK1 { c },
            residue_minus: SU2Residues::trivial(),
            residue_plus: SU2Residues::trivial(),
        }
    }

    /// `f_1 = D cn/sn`, `f_2 = D dn/sn`, `f_3 = D/sn` at `x = D (s + 1)`,
    /// `D = K(m)`; all three signs are `+`, which gives `f_1' = -f_2 f_3`
    /// (and cyclic) and hence Nahm's equations. The residue at `s = -1` is
    /// `i sigma_j / 2` and at `s = +1` it is `(i/2)(sigma_1, -sigma_2, -sigma_3)`.
    pub fn builtin_k2(m: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&m) {
            return Err(Error::InvalidModulus(m));
        }
        let d = complete_k(m)?;
        let half_i = C64::new(0.0, 0.5);
        let [s1, s2, s3] = pauli();
        let plus = SU2Residues::new([&s1 * half_i, &s2 * -half_i, &s3 * -half_i], None)?;
        Ok(NahmData { k: 2, kind: NahmKind::BuiltinK2 { m, d }, residue_minus: su2_residues(2), residue_plus: plus })
    }

    /// Data interpolated from samples; see [`Tabulated`].
    pub fn tabulated(
        samples: Vec<(f64, Triple)>,
        residue_minus: SU2Residues,
        residue_plus: SU2Residues,
    ) -> Result<Self> {
        let k = residue_minus.k();
        if residue_plus.k() != k {
            return Err(Error::InvalidNahm("residues at the two endpoints have different sizes".into()));
        }
        let tab = Tabulated::new(samples, &residue_minus, &residue_plus)?;
        Ok(NahmData { k, kind: NahmKind::Tabulated(tab), residue_minus, residue_plus })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> &NahmKind {
        &self.kind
    }

    pub fn residue_minus(&self) -> &SU2Residues {
        &self.residue_minus
    }

    pub fn residue_plus(&self) -> &SU2Residues {
        &self.residue_plus
    }

    /// `(T_1, T_2, T_3)(s)` for `s` in `(-1, 1)`.
    pub fn sample(&self, s: f64) -> Triple {
        match &self.kind {
            NahmKind::BuiltinK1 { c } => {
                std::array::from_fn(|j| CMatrix::from_element(1, 1, C64::new(0.0, -0.5 * c[j])))
            }
            NahmKind::BuiltinK2 { m, d } => {
                // Evaluate from the nearer pole: sn and dn are even about 2K, cn is odd.
                let (x, cn_sign) = if s > 0.0 { (d * (1.0 - s), -1.0) } else { (d * (s + 1.0), 1.0) };
                let v = jacobi_elliptic(x, *m).expect("modulus validated at construction");
                let f = [cn_sign * d * v.cn / v.sn, d * v.dn / v.sn, d / v.sn];
                let p = pauli();
                std::array::from_fn(|j| &p[j] * C64::new(0.0, 0.5 * f[j]))
            }
            NahmKind::Tabulated(tab) => {
                let pole = |r: &SU2Residues, j: usize, denom: f64| &r.t()[j] / C64::new(denom, 0.0);
                let reg = tab.regular_part(s);
                std::array::from_fn(|j| {
                    &reg[j] + pole(&self.residue_minus, j, s + 1.0) + pole(&self.residue_plus, j, s - 1.0)
                })
            }
        }
    }
}

/// Samples of `T_i` on a strictly increasing grid inside `(-1, 1)`.
///
/// The pole parts `t^-/(s+1) + t^+/(s-1)` implied by the declared residues
/// are subtracted at construction; the smooth remainder is interpolated by
/// local cubics through the four nearest samples (fewer if fewer exist) and
/// held by its end cubic outside the sampled range.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    k: usize,
    s: Vec<f64>,
    regular: Vec<Triple>,
}

impl Tabulated {
    fn new(
        samples: Vec<(f64, Triple)>,
        residue_minus: &SU2Residues,
        residue_plus: &SU2Residues,
    ) -> Result<Self> {
        let k = residue_minus.k();
        if samples.len() < 2 {
            return Err(Error::InvalidNahm("at least two samples are required".into()));
        }
        if k > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(k));
        }
        let mut s = Vec::with_capacity(samples.len());
        let mut regular = Vec::with_capacity(samples.len());
        for (si, t) in samples {
            if !(si > -1.0 && si < 1.0) {
                return Err(Error::InvalidNahm(format!("sample point {si} outside (-1, 1)")));
            }
            if s.last().is_some_and(|&p| si <= p) {
                return Err(Error::InvalidNahm("sample points must increase strictly".into()));
            }
            if t.iter().any(|m| m.nrows() != k || m.ncols() != k || !linalg::all_finite(m)) {
                return Err(Error::InvalidNahm(format!("sample at s = {si} is not a finite {k}x{k} triple")));
            }
            let reg: Triple = std::array::from_fn(|j| {
                &t[j] - &residue_minus.t()[j] / C64::new(si + 1.0, 0.0) - &residue_plus.t()[j] / C64::new(si - 1.0, 0.0)
            });
            s.push(si);
            regular.push(reg);
        }
        Ok(Tabulated { k, s, regular })
    }

    pub fn points(&self) -> &[f64] {
        &self.s
    }

    fn regular_part(&self, x: f64) -> Triple {
        let n = self.s.len();
        let width = n.min(4);
        let idx = self.s.partition_point(|&p| p < x);
        let start = idx.saturating_sub(width / 2).min(n - width);
        let nodes = start..start + width;
        let mut out: Triple = std::array::from_fn(|_| CMatrix::zeros(self.k, self.k));
        for a in nodes.clone() {
            let mut w = 1.0;
            for b in nodes.clone() {
                if a != b {
                    w *= (x - self.s[b]) / (self.s[a] - self.s[b]);
                }
            }
            for j in 0..3 {
                out[j] += &self.regular[a][j] * C64::new(w, 0.0);
            }
        }
        out
    }
}
