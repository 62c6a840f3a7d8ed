use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{analyze, Verdict, Witness};
use crate::constructions::{analyze_two_by_two, embed_pair, rotation, shear_a_theta};
use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, quasi_triangular_blocks, real_schur, Matrix, Tolerances};
use crate::maps::MatrixSpaceMap;
use crate::membership::{membership, SetKind};
use crate::sampling::{exp_of_small, gaussian, k_star_sample, nonstandard_two_sided, rng_for, standard_form};

pub const DEFAULT_BUDGET: usize = 10_000;

/// Angles per full turn in the structured grids.
const GRID: usize = 360;
const ROTATION_FILLS: [f64; 2] = [1.0, 1e-2];
const TARGETED_FILLS: [f64; 3] = [1.0, 1e-2, 1e2];
const COARSE_ANGLES: usize = 12;

fn grid_angle(k: usize) -> f64 {
    -PI + (k as f64 + 0.5) * 2.0 * PI / GRID as f64
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Candidates built from the real Schur form of `M = QP` when `φ` is
/// two-sided, so that `φ(A)` is similar to `A M`. In the Schur basis a 2x2
/// gadget `G` on an aligned pair of rows makes `A M` block triangular with
/// the diagonal block `G T_kk`, and the gadgets are chosen so that this
/// block has two distinct negative eigenvalues.
fn targeted_candidates(phi: &MatrixSpaceMap, tol: &Tolerances) -> Vec<Matrix> {
    let n = phi.n;
    let Some(f) = phi.two_sided_factors(tol) else { return Vec::new() };
    let m = &f.q * &f.p;
    let Ok(schur) = real_schur(&m, tol) else { return Vec::new() };
    let blocks = quasi_triangular_blocks(&schur.t);
    let mut starts = Vec::new();
    for w in 0..blocks.len() {
        if blocks[w].size == 2 || (w + 1 < blocks.len() && blocks[w + 1].size == 1) {
            starts.push(blocks[w].start);
        }
    }
    let mut out = Vec::new();
    for k in starts {
        let t = schur.t.submatrix(k, k, 2, 2);
        let mut gadgets = Vec::new();
        if let Ok(a) = analyze_two_by_two(t[(0, 0)], t[(0, 1)], t[(1, 0)], t[(1, 1)]) {
            let w = a.witness_angle();
            for theta in [w, w - 0.05, w + 0.05] {
                gadgets.push(rotation(theta));
            }
            if let Ok(shear) = shear_a_theta(t[(1, 0)].atan2(t[(0, 0)])) {
                gadgets.push(shear);
            }
        }
        for j in 0..COARSE_ANGLES {
            gadgets.push(rotation(2.0 * PI * (j as f64 + 0.25) / COARSE_ANGLES as f64));
        }
        for g in &gadgets {
            for fill in TARGETED_FILLS {
                let inner = embed_pair(g, n, k, k + 1, fill).expect("aligned pair");
                let x = &(&schur.q * &inner) * &schur.q.transpose();
                out.push(if f.transposed { x.transpose() } else { x });
            }
        }
    }
    out
}

struct Candidates<'a> {
    n: usize,
    target: SetKind,
    seed: u64,
    fixed: Vec<Matrix>,
    pairs: Vec<(usize, usize)>,
    rotations: usize,
    shears: usize,
    _phi: &'a MatrixSpaceMap,
}

impl<'a> Candidates<'a> {
    fn new(phi: &'a MatrixSpaceMap, target: SetKind, seed: u64, tol: &Tolerances) -> Self {
        let n = phi.n;
        let pairs = pairs(n);
        let mut fixed: Vec<Matrix> = pairs
            .iter()
            .map(|&(i, j)| embed_pair(&Matrix::scalar(2, -1.0), n, i, j, 1.0).expect("valid pair"))
            .collect();
        fixed.push(Matrix::scalar(n, -1.0));
        fixed.push(Matrix::identity(n));
        fixed.extend(targeted_candidates(phi, tol));
        let rotations = pairs.len() * ROTATION_FILLS.len() * GRID;
        let shears = pairs.len() * 2 * GRID;
        Self { n, target, seed, fixed, pairs, rotations, shears, _phi: phi }
    }

    fn rotation_item(&self, idx: usize) -> Matrix {
        let theta = grid_angle(idx % GRID);
        let fill = ROTATION_FILLS[(idx / GRID) % ROTATION_FILLS.len()];
        let (i, j) = self.pairs[idx / (GRID * ROTATION_FILLS.len())];
        embed_pair(&rotation(theta), self.n, i, j, fill).expect("valid pair")
    }

    fn shear_item(&self, idx: usize) -> Matrix {
        let theta = grid_angle(idx % GRID);
        let transposed = (idx / GRID) % 2 == 1;
        let (i, j) = self.pairs[idx / (GRID * 2)];
        let a = shear_a_theta(theta).expect("grid avoids multiples of pi");
        let a = if transposed { a.transpose() } else { a };
        embed_pair(&a, self.n, i, j, 1.0).expect("valid pair")
    }

    fn random_item(&self, trial: usize) -> Matrix {
        let mut rng = rng_for(self.seed, trial as u64);
        match (self.target, rng.gen_range(0..2)) {
            (_, 0) => gaussian(&mut rng, self.n, self.n),
            (SetKind::K, _) => exp_of_small(&mut rng, self.n, 3.0),
            _ => k_star_sample(&mut rng, self.n),
        }
    }

    /// Candidate number `trial`: fixed and targeted seeds first, then the
    /// rotation grid, shear grid and random samples in turn.
    fn get(&self, trial: usize) -> Matrix {
        if trial < self.fixed.len() {
            return self.fixed[trial].clone();
        }
        let g = trial - self.fixed.len();
        let (slot, idx) = (g % 3, g / 3);
        match slot {
            0 if idx < self.rotations => self.rotation_item(idx),
            1 if idx < self.shears => self.shear_item(idx),
            _ => self.random_item(trial),
        }
    }
}

/// Searches for `A` in `target` with `φ(A)` outside it, trying at most
/// `budget` candidates. `None` means no witness was found, not that `φ`
/// preserves the set.
pub fn falsify_preservation(
    phi: &MatrixSpaceMap,
    target: SetKind,
    budget: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Option<Witness>> {
    if target == SetKind::Closure {
        return Err(Error::InvalidArgument("witness search supports K and Kstar".into()));
    }
    let candidates = Candidates::new(phi, target, seed, tol);
    for trial in 0..budget {
        let a = candidates.get(trial);
        match membership(&a, target, tol) {
            Ok(v) if v.in_set => {}
            _ => continue,
        }
        let image = phi.apply(&a)?;
        if !image.is_finite() {
            continue;
        }
        if let Ok(v) = membership(&image, target, tol) {
            if let Some(w) = v.witness.filter(|_| !v.in_set) {
                return Ok(Some(Witness {
                    matrix: a,
                    image,
                    set: target,
                    explanation: format!("matrix is in {target} but its image is not: {}", w.reason),
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GlDirection {
    /// Invertible `A` with singular `φ(A)`.
    Forward,
    /// Invertible `B` with singular `φ^{-1}(B)`.
    Backward,
    /// Singular `A` with invertible `φ(A)`, so `φ^{-1}` leaves `GL_n`
    /// at the invertible matrix `φ(A)`.
    SingularImage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlWitness {
    pub matrix: Matrix,
    pub image: Matrix,
    pub direction: GlDirection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlCheck {
    pub preserved: bool,
    pub witness: Option<GlWitness>,
}

fn rank_one_deficient<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let mut a = gaussian(rng, n, n);
    let w: Vec<f64> = (0..n.saturating_sub(1)).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let last: Vec<f64> = (0..n).map(|i| (0..n - 1).map(|j| w[j] * a[(i, j)]).sum()).collect();
    a.set_column(n - 1, &last);
    a
}

/// Samples whether `φ(GL_n) = GL_n`: invertible matrices must map to
/// invertible ones under `φ` and `φ^{-1}`, and singular ones to singular ones.
pub fn check_gl_preservation(phi: &MatrixSpaceMap, samples: usize, seed: u64, tol: &Tolerances) -> Result<GlCheck> {
    let inverse = phi.inverse(tol)?;
    let n = phi.n;
    let invertible = |a: &Matrix| numerical_rank(a, tol) == n;
    for t in 0..samples {
        let mut rng = rng_for(seed, t as u64);
        let a = gaussian(&mut rng, n, n);
        let b = gaussian(&mut rng, n, n);
        let s = rank_one_deficient(&mut rng, n);
        let checks = [
            (a, &*phi, true, GlDirection::Forward),
            (b, &inverse, true, GlDirection::Backward),
            (s, &*phi, false, GlDirection::SingularImage),
        ];
        for (x, map, expect_invertible, direction) in checks {
            if invertible(&x) != expect_invertible {
                continue;
            }
            let y = map.apply(&x)?;
            if invertible(&y) != expect_invertible {
                return Ok(GlCheck { preserved: false, witness: Some(GlWitness { matrix: x, image: y, direction }) });
            }
        }
    }
    Ok(GlCheck { preserved: true, witness: None })
}

/// First sampled `A` whose membership in `set` differs from that of `φ(A)`.
/// Half the samples are drawn from the set, half are Gaussian.
pub fn membership_mismatch(
    phi: &MatrixSpaceMap,
    set: SetKind,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Option<Matrix>> {
    let n = phi.n;
    for t in 0..samples {
        let mut rng = rng_for(seed, t as u64);
        let a = match (t % 2, set) {
            (0, _) => gaussian(&mut rng, n, n),
            (_, SetKind::K) => exp_of_small(&mut rng, n, 3.0),
            _ => k_star_sample(&mut rng, n),
        };
        let before = membership(&a, set, tol)?.in_set;
        let after = membership(&phi.apply(&a)?, set, tol)?.in_set;
        if before != after {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Alias kept for callers that count failures over a batch of maps.
pub fn preservation_failures(
    maps: &[MatrixSpaceMap],
    set: SetKind,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<usize> {
    let mut failures = 0;
    for (k, m) in maps.iter().enumerate() {
        if membership_mismatch(m, set, samples, seed.wrapping_add(k as u64), tol)?.is_some() {
            failures += 1;
        }
    }
    Ok(failures)
}

/// Outcome of a randomized check of both directions of the preserver
/// characterization.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub n: usize,
    pub trials: usize,
    /// Standard maps whose form was recovered and which preserved membership
    /// on the samples.
    pub standard_confirmed: usize,
    /// Non-standard two-sided maps for which a `K*` witness was found.
    pub nonstandard_refuted: usize,
    pub max_scale_error: f64,
    pub max_conjugator_error: f64,
}

impl TheoremReport {
    pub fn all_passed(&self) -> bool {
        self.standard_confirmed == self.trials && self.nonstandard_refuted == self.trials
    }
}

/// Membership samples per standard map in [`verify_theorem`].
pub const THEOREM_SAMPLES: usize = 20;

pub fn verify_theorem(n: usize, trials: usize, seed: u64, tol: &Tolerances) -> Result<TheoremReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let mut report = TheoremReport { n, trials, ..Default::default() };
    for t in 0..trials {
        let mut rng = rng_for(seed, t as u64);
        let sf = standard_form(&mut rng, n, 100.0);
        let map = MatrixSpaceMap::from_standard(&sf, tol)?;
        let r = analyze(&map, tol);
        if let (Verdict::StandardPreserver, Some(form)) = (r.verdict, r.form) {
            let scale_err = (form.c - sf.c).abs() / sf.c;
            let p_err = form.p.distance(&sf.p);
            report.max_scale_error = report.max_scale_error.max(scale_err);
            report.max_conjugator_error = report.max_conjugator_error.max(p_err);
            let mut ok = (n == 1 || form.transposed == sf.transposed) && scale_err <= 1e-9 && p_err <= 1e-8;
            for set in [SetKind::K, SetKind::KStar] {
                ok &= membership_mismatch(&map, set, THEOREM_SAMPLES, seed ^ t as u64, tol)?.is_none();
            }
            if ok {
                report.standard_confirmed += 1;
            }
        }
        let other = nonstandard_two_sided(&mut rng, n);
        if falsify_preservation(&other, SetKind::KStar, DEFAULT_BUDGET, t as u64, tol)?.is_some() {
            report.nonstandard_refuted += 1;
        }
    }
    Ok(report)
}
