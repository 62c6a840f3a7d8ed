//! Eigenvalue clustering with rank validation.
//!
//! Computed eigenvalues of a defective eigenvalue spread out on a circle of
//! radius roughly `(u ||A||)^(1/k)` for a Jordan block of size `k`, so a fixed
//! clustering radius either splits defective clusters or merges distinct
//! eigenvalues. Clusters are therefore formed on a ladder of radii from
//! coarse to fine, and a cluster of size `m` centred at `mu` is accepted
//! only when the generalized null space of `A - mu I` (or of the real
//! quadratic `(A - mu I)(A - conj(mu) I)` for a complex centre) has exactly
//! the dimension the cluster claims.

use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::{real_schur, reference_scale, Matrix, PivotedQr, Tolerances};

/// Coarse-to-fine clustering radii, relative to `||A||_F`. The finest level
/// is taken from the tolerances.
pub const CLUSTER_LADDER: [f64; 8] = [3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 1e-6, 1e-7];

/// A validated eigenvalue cluster. Complex clusters are stored once, by the
/// member in the upper half plane, and stand for the conjugate cluster too.
#[derive(Debug, Clone)]
pub struct Cluster {
    pub center: Complex64,
    /// Number of eigenvalues represented, counting both halves of a
    /// complex conjugate cluster.
    pub multiplicity: usize,
    pub is_real: bool,
    /// `rank((A - center I)^k)` for `k = 0..=m` for real clusters.
    pub rank_sequence: Vec<usize>,
    /// Clustering radius (absolute) at which the cluster was accepted.
    pub radius: f64,
    /// Whether the rank test confirmed the multiplicity.
    pub validated: bool,
}

/// Spectrum of a matrix grouped into validated clusters.
#[derive(Debug, Clone)]
pub struct SpectralAnalysis {
    pub n: usize,
    pub scale: f64,
    pub eigenvalues: Vec<Complex64>,
    pub clusters: Vec<Cluster>,
}

/// Ranks of successive powers of `op` restricted to the shrinking ranges,
/// using an orthonormal basis of each range so that error does not grow
/// with the power.
pub(crate) fn rank_sequence(op: &Matrix, max_power: usize, threshold: f64) -> Vec<usize> {
    let n = op.rows();
    let mut ranks = vec![n];
    let mut basis = Matrix::identity(n);
    for _ in 0..max_power {
        if basis.cols() == 0 {
            ranks.push(0);
            continue;
        }
        let image = op * &basis;
        let qr = PivotedQr::new(&image);
        let r = qr.rank_above(threshold);
        basis = qr.q.columns(0, r);
        ranks.push(r);
    }
    ranks
}

fn is_convex(ranks: &[usize]) -> bool {
    ranks.windows(3).all(|w| w[0] + w[2] >= 2 * w[1]) && ranks.windows(2).all(|w| w[0] >= w[1])
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut k = i;
        while self.0[k] != r {
            let next = self.0[k];
            self.0[k] = r;
            k = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn single_linkage(values: &[Complex64], members: &[usize], radius: f64) -> Vec<Vec<usize>> {
    let mut uf = UnionFind((0..members.len()).collect());
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            if (values[members[a]] - values[members[b]]).norm() <= radius {
                uf.union(a, b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; members.len()];
    for a in 0..members.len() {
        let r = uf.find(a);
        match root_slot[r] {
            Some(slot) => groups[slot].push(members[a]),
            None => {
                root_slot[r] = Some(groups.len());
                groups.push(vec![members[a]]);
            }
        }
    }
    groups
}

struct Clusterer<'a> {
    a: &'a Matrix,
    values: &'a [Complex64],
    partner: &'a [usize],
    radii: Vec<f64>,
    threshold: f64,
    quad_threshold: f64,
}

impl Clusterer<'_> {
    fn refine(&self, members: &[usize], level: usize, out: &mut Vec<Cluster>) {
        let radius = self.radii[level];
        for group in single_linkage(self.values, members, radius) {
            let self_conjugate = group.iter().all(|i| group.contains(&self.partner[*i]));
            if !self_conjugate && self.values[group[0]].im < 0.0 {
                continue; // mirror of an upper cluster
            }
            let last = level + 1 == self.radii.len();
            match self.validate(&group, self_conjugate, radius) {
                Some(c) => out.push(c),
                None if !last => self.refine(&group, level + 1, out),
                None => out.push(self.unvalidated(&group, self_conjugate, radius)),
            }
        }
    }

    fn center(&self, group: &[usize], real: bool) -> Complex64 {
        let sum: Complex64 = group.iter().map(|&i| self.values[i]).sum();
        let mean = sum / group.len() as f64;
        if real {
            Complex64::new(mean.re, 0.0)
        } else {
            mean
        }
    }

    fn quadratic(&self, mu: Complex64) -> Matrix {
        let a2 = self.a * self.a;
        let mut q = &a2 - &self.a.scale(2.0 * mu.re);
        let n = self.a.rows();
        for i in 0..n {
            q[(i, i)] += mu.norm_sqr();
        }
        q
    }

    fn validate(&self, group: &[usize], real: bool, radius: f64) -> Option<Cluster> {
        let n = self.a.rows();
        let m = group.len();
        let center = self.center(group, real);
        if real {
            if m == 1 {
                return Some(Cluster {
                    center,
                    multiplicity: 1,
                    is_real: true,
                    rank_sequence: vec![n, n - 1],
                    radius,
                    validated: true,
                });
            }
            let ranks = rank_sequence(&self.a.shifted(center.re), m, self.threshold);
            (n - ranks[m] == m && is_convex(&ranks)).then(|| Cluster {
                center,
                multiplicity: m,
                is_real: true,
                rank_sequence: ranks,
                radius,
                validated: true,
            })
        } else {
            if m > 1 {
                let ranks = rank_sequence(&self.quadratic(center), m, self.quad_threshold);
                if n - ranks[m] != 2 * m {
                    return None;
                }
            }
            Some(Cluster {
                center,
                multiplicity: 2 * m,
                is_real: false,
                rank_sequence: Vec::new(),
                radius,
                validated: true,
            })
        }
    }

    fn unvalidated(&self, group: &[usize], real: bool, radius: f64) -> Cluster {
        let n = self.a.rows();
        let m = group.len();
        let center = self.center(group, real);
        let rank_sequence = if real {
            let mut ranks = rank_sequence(&self.a.shifted(center.re), m, self.threshold);
            // anchor the sequence to the multiplicity the clustering claims
            for (k, r) in ranks.iter_mut().enumerate() {
                *r = (*r).max(n - m).min(n - k.min(m));
            }
            ranks
        } else {
            Vec::new()
        };
        Cluster { center, multiplicity: if real { m } else { 2 * m }, is_real: real, rank_sequence, radius, validated: false }
    }
}

/// Eigenvalues of `a` grouped into rank-validated clusters.
pub fn analyze_spectrum(a: &Matrix, tol: &Tolerances) -> Result<SpectralAnalysis> {
    let n = a.ensure_square()?;
    let schur = real_schur(a, tol)?;
    let values = schur.eigenvalues();
    let mut partner: Vec<usize> = (0..n).collect();
    let mut idx = 0;
    for b in schur.blocks() {
        if b.size == 2 {
            partner[idx] = idx + 1;
            partner[idx + 1] = idx;
        }
        idx += b.size;
    }
    let scale = reference_scale(a);
    let finest = tol.eig_cluster.max(2.0 * tol.imag_zero);
    let mut radii: Vec<f64> = CLUSTER_LADDER.iter().copied().filter(|&r| r > finest).collect();
    radii.push(finest);
    let radii: Vec<f64> = radii.into_iter().map(|r| r * scale).collect();

    let clusterer = Clusterer {
        a,
        values: &values,
        partner: &partner,
        radii,
        threshold: tol.rank_rel * scale,
        quad_threshold: tol.rank_rel * scale * scale,
    };
    let mut clusters = Vec::new();
    let all: Vec<usize> = (0..n).collect();
    clusterer.refine(&all, 0, &mut clusters);
    clusters.sort_by(|x, y| x.center.re.total_cmp(&y.center.re).then(x.center.im.total_cmp(&y.center.im)));
    Ok(SpectralAnalysis { n, scale, eigenvalues: values, clusters })
}
