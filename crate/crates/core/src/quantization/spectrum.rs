//! Box-regularized spectrum of the quantum Toda Hamiltonian
//! `Ĥ = −2 ∂²_{q₁} − 2 Σ_{i≥2} (∂_{q_i} − ∂_{q_{i−1}})² + 4 Σ e^{2q_i}`
//! with Dirichlet walls.
//!
//! In the z-chart (`q_i = z_i − z_{i+1}`, `q_{n−1} = z_{n−1}`) the kinetic
//! term is the plain Laplacian `−2 Σ ∂²_{z_i}`. The q-chart stencil takes
//! second differences along the lattice directions `e_1, e_i − e_{i−1}`,
//! which is exactly the image of the z-chart five-point stencil.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigen_solve_with, CsrMatrix, EigenOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Q,
    Z,
}

impl std::str::FromStr for Chart {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" => Ok(Chart::Q),
            "z" => Ok(Chart::Z),
            other => Err(Error::InvalidArgument(format!("unknown chart {other:?} (expected q or z)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// Tensor box in the chart's own coordinates.
    Box,
    /// `bounds` and `grid` describe a box in q; the operator is assembled in
    /// the chart on the lattice points whose q-image lies inside that box.
    QBoxImage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralProblem {
    pub n: usize,
    pub chart: Chart,
    /// `(lower, upper)` per axis.
    pub bounds: Vec<(f64, f64)>,
    /// Number of grid intervals per axis; interior points are `grid − 1`.
    pub grid: Vec<usize>,
    pub region: Region,
}

impl SpectralProblem {
    /// Same box and grid count on every axis.
    pub fn uniform(n: usize, chart: Chart, lo: f64, hi: f64, grid: usize) -> Self {
        Self {
            n,
            chart,
            bounds: vec![(lo, hi); n.saturating_sub(1)],
            grid: vec![grid; n.saturating_sub(1)],
            region: Region::Box,
        }
    }

    pub fn with_region(mut self, region: Region) -> Self {
        self.region = region;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::LatticeTooSmall(self.n));
        }
        let m = self.n - 1;
        for len in [self.bounds.len(), self.grid.len()] {
            if len != m {
                return Err(Error::DimensionMismatch { expected: m, found: len });
            }
        }
        for (axis, ((lo, hi), count)) in self.bounds.iter().zip(&self.grid).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidProblem(format!("axis {axis}: need finite lower < upper")));
            }
            if *count < 8 {
                return Err(Error::GridTooCoarse { axis, count: *count });
            }
        }
        if self.needs_uniform_spacing() {
            let h0 = self.spacing(0);
            if (1..m).any(|k| (self.spacing(k) - h0).abs() > 1e-12 * h0) {
                return Err(Error::InvalidProblem(
                    "diagonal stencil needs equal spacing on every axis".into(),
                ));
            }
        }
        Ok(())
    }

    fn needs_uniform_spacing(&self) -> bool {
        self.n > 2 && (self.chart == Chart::Q || self.region == Region::QBoxImage)
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        let (lo, hi) = self.bounds[axis];
        (hi - lo) / self.grid[axis] as f64
    }
}

/// `q` from `z`.
pub fn z_to_q(z: &[f64]) -> Vec<f64> {
    let m = z.len();
    (0..m).map(|i| if i + 1 < m { z[i] - z[i + 1] } else { z[i] }).collect()
}

/// `z_i = Σ_{j≥i} q_j`.
pub fn q_to_z(q: &[f64]) -> Vec<f64> {
    let mut z = q.to_vec();
    for i in (0..z.len().saturating_sub(1)).rev() {
        z[i] += z[i + 1];
    }
    z
}

fn z_to_q_int(z: &[i64]) -> Vec<i64> {
    let m = z.len();
    (0..m).map(|i| if i + 1 < m { z[i] - z[i + 1] } else { z[i] }).collect()
}

/// Discretized operator together with its grid.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub matrix: CsrMatrix,
    /// Chart coordinates of each unknown.
    pub nodes: Vec<Vec<f64>>,
}

struct Lattice {
    origin: Vec<f64>,
    step: Vec<f64>,
    // interior index range per axis, inclusive
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Lattice {
    fn coords(&self, k: &[i64]) -> Vec<f64> {
        k.iter()
            .zip(self.origin.iter().zip(&self.step))
            .map(|(ki, (o, h))| o + h * *ki as f64)
            .collect()
    }
}

/// Assembles `Ĥ` with Dirichlet walls; symmetric by construction.
pub fn build_hamiltonian(problem: &SpectralProblem) -> Result<Discretization> {
    problem.validate()?;
    let m = problem.n - 1;
    let b = &problem.bounds;
    let g = &problem.grid;

    let lattice = match (problem.chart, problem.region) {
        (_, Region::Box) | (Chart::Q, Region::QBoxImage) => Lattice {
            origin: b.iter().map(|x| x.0).collect(),
            step: (0..m).map(|k| problem.spacing(k)).collect(),
            lo: vec![1; m],
            hi: g.iter().map(|c| *c as i64 - 1).collect(),
        },
        (Chart::Z, Region::QBoxImage) => {
            // z-lattice generated by the q-lattice, over the image's bounding box
            let lo_q: Vec<f64> = b.iter().map(|x| x.0).collect();
            let counts: Vec<i64> = g.iter().map(|c| *c as i64).collect();
            let tail: Vec<i64> = q_to_z(&counts.iter().map(|c| *c as f64).collect::<Vec<_>>())
                .iter()
                .map(|x| *x as i64)
                .collect();
            Lattice {
                origin: q_to_z(&lo_q),
                step: vec![problem.spacing(0); m],
                lo: vec![0; m],
                hi: tail,
            }
        }
    };

    let inside = |k: &[i64]| -> bool {
        match (problem.chart, problem.region) {
            (Chart::Z, Region::QBoxImage) => z_to_q_int(k)
                .iter()
                .zip(g)
                .all(|(qi, c)| *qi >= 1 && *qi < *c as i64),
            _ => k
                .iter()
                .zip(lattice.lo.iter().zip(&lattice.hi))
                .all(|(ki, (l, h))| ki >= l && ki <= h),
        }
    };

    // enumerate the bounding index box, first axis slowest
    let extents: Vec<usize> = (0..m).map(|k| (lattice.hi[k] - lattice.lo[k] + 1).max(0) as usize).collect();
    let total: usize = extents.iter().product();
    let flat = |k: &[i64]| -> Option<usize> {
        let mut f = 0usize;
        for a in 0..m {
            let off = k[a] - lattice.lo[a];
            if off < 0 || off as usize >= extents[a] {
                return None;
            }
            f = f * extents[a] + off as usize;
        }
        Some(f)
    };
    let mut row_of = vec![usize::MAX; total];
    let mut keys: Vec<Vec<i64>> = Vec::new();
    let mut k = lattice.lo.clone();
    for f in 0..total {
        let mut rest = f;
        for a in (0..m).rev() {
            k[a] = lattice.lo[a] + (rest % extents[a]) as i64;
            rest /= extents[a];
        }
        if inside(&k) {
            row_of[f] = keys.len();
            keys.push(k.clone());
        }
    }
    if keys.is_empty() {
        return Err(Error::InvalidProblem("no interior grid points".into()));
    }

    // stencil directions in lattice index space, with their step lengths
    let directions: Vec<(Vec<i64>, f64)> = (0..m)
        .map(|j| {
            let mut d = vec![0i64; m];
            d[j] = 1;
            if problem.chart == Chart::Q && j > 0 {
                d[j - 1] = -1;
            }
            (d, lattice.step[j])
        })
        .collect();

    let mut triplets = Vec::with_capacity(keys.len() * (2 * m + 1));
    let mut nodes = Vec::with_capacity(keys.len());
    let mut neighbour = vec![0i64; m];
    for (row, key) in keys.iter().enumerate() {
        let x = lattice.coords(key);
        let q = match problem.chart {
            Chart::Q => x.clone(),
            Chart::Z => z_to_q(&x),
        };
        let mut diag: f64 = q.iter().map(|qi| 4.0 * (2.0 * qi).exp()).sum();
        if !diag.is_finite() {
            return Err(Error::Overflow("potential on the grid"));
        }
        for (d, h) in &directions {
            let c = 2.0 / (h * h);
            diag += 2.0 * c;
            for sign in [-1i64, 1] {
                for a in 0..m {
                    neighbour[a] = key[a] + sign * d[a];
                }
                if inside(&neighbour) {
                    if let Some(col) = flat(&neighbour).map(|f| row_of[f]) {
                        triplets.push((row, col, -c));
                    }
                }
            }
        }
        triplets.push((row, row, diag));
        nodes.push(x);
    }
    Ok(Discretization {
        matrix: CsrMatrix::from_triplets(keys.len(), triplets),
        nodes,
    })
}

/// Lowest eigenpairs of a discretized problem, with the metadata needed to
/// reproduce them.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub problem: SpectralProblem,
    pub dimension: usize,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub lanczos_steps: usize,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
    #[serde(skip)]
    pub nodes: Vec<Vec<f64>>,
}

pub fn solve_spectrum(problem: &SpectralProblem, k: usize) -> Result<Spectrum> {
    solve_spectrum_with(problem, k, &EigenOptions::default())
}

pub fn solve_spectrum_with(problem: &SpectralProblem, k: usize, opts: &EigenOptions) -> Result<Spectrum> {
    let disc = build_hamiltonian(problem)?;
    let pairs = eigen_solve_with(&disc.matrix, k, opts)?;
    Ok(Spectrum {
        problem: problem.clone(),
        dimension: disc.matrix.dim(),
        eigenvalues: pairs.values,
        residuals: pairs.residuals,
        lanczos_steps: pairs.lanczos_steps,
        eigenvectors: pairs.vectors,
        nodes: disc.nodes,
    })
}

impl Spectrum {
    /// One row per grid node: chart coordinates then `ψ_0 … ψ_{k−1}`.
    pub fn write_eigenfunctions_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let m = self.problem.n - 1;
        let prefix = match self.problem.chart {
            Chart::Q => "q",
            Chart::Z => "z",
        };
        let mut header: Vec<String> = (1..=m).map(|i| format!("{prefix}_{i}")).collect();
        header.extend((0..self.eigenvectors.len()).map(|j| format!("psi_{j}")));
        writeln!(w, "{}", header.join(","))?;
        for (row, x) in self.nodes.iter().enumerate() {
            let mut cells: Vec<String> = x.iter().map(|v| format!("{v:.16e}")).collect();
            cells.extend(self.eigenvectors.iter().map(|v| format!("{:.16e}", v[row])));
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Observed convergence order and extrapolated limit from three values on
/// grids refined by 2 each time.
pub fn richardson(coarse: f64, medium: f64, fine: f64) -> (f64, f64) {
    let order = ((coarse - medium) / (medium - fine)).log2();
    let extrapolated = fine + (fine - medium) / (2f64.powf(order) - 1.0);
    (order, extrapolated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    #[test]
    fn chart_maps_are_inverse() {
        let q = [0.3, -1.2, 2.0];
        let z = q_to_z(&q);
        assert_eq!(z, vec![1.1, 0.8, 2.0]);
        let back = z_to_q(&z);
        for (a, b) in back.iter().zip(&q) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_coarse_grid() {
        let p = SpectralProblem::uniform(2, Chart::Q, -12.0, 4.0, 7);
        assert!(matches!(build_hamiltonian(&p), Err(Error::GridTooCoarse { axis: 0, count: 7 })));
    }

    #[test]
    fn rejects_unequal_spacing_for_diagonal_stencil() {
        let mut p = SpectralProblem::uniform(3, Chart::Q, -6.0, 3.0, 12);
        p.grid[1] = 13;
        assert!(matches!(build_hamiltonian(&p), Err(Error::InvalidProblem(_))));
    }

    #[test]
    fn one_dimensional_operator() {
        let p = SpectralProblem::uniform(2, Chart::Q, -1.0, 1.0, 10);
        let d = build_hamiltonian(&p).unwrap();
        let h: f64 = 0.2;
        assert_eq!(d.matrix.dim(), 9);
        let q0 = -1.0 + h;
        assert!((d.matrix.get(0, 0) - (4.0 / (h * h) + 4.0 * (2.0 * q0).exp())).abs() < 1e-12);
        assert!((d.matrix.get(0, 1) + 2.0 / (h * h)).abs() < 1e-12);
        assert_eq!(d.matrix.max_asymmetry(), 0.0);
    }

    #[test]
    fn q_and_z_stencils_coincide_on_the_image_lattice() {
        let q = SpectralProblem::uniform(3, Chart::Q, -4.0, 2.0, 12);
        let z = q.clone().with_region(Region::QBoxImage);
        let z = SpectralProblem { chart: Chart::Z, ..z };
        let mq = build_hamiltonian(&q).unwrap().matrix.to_dense();
        let mz = build_hamiltonian(&z).unwrap().matrix.to_dense();
        assert_eq!(mq.nrows(), mz.nrows());
        let eq = SymmetricEigen::new(mq).eigenvalues;
        let ez = SymmetricEigen::new(mz).eigenvalues;
        let mut a: Vec<f64> = eq.iter().cloned().collect();
        let mut b: Vec<f64> = ez.iter().cloned().collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn spectrum_is_nonnegative() {
        let p = SpectralProblem::uniform(3, Chart::Z, -5.0, 3.0, 16);
        let d = build_hamiltonian(&p).unwrap();
        let e = SymmetricEigen::new(d.matrix.to_dense()).eigenvalues;
        assert!(e.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn richardson_recovers_second_order() {
        let f = |h: f64| 1.5 + 0.3 * h * h;
        let (p, x) = richardson(f(0.4), f(0.2), f(0.1));
        assert!((p - 2.0).abs() < 1e-10);
        assert!((x - 1.5).abs() < 1e-12);
    }
}
