use super::grid::Discretization;
use super::operators::discretize;
use crate::error::{Error, Result};
use crate::linalg::{count_below, eigenvalues_in, inverse_iteration, BandMatrix};
use crate::model::PotentialModel;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// Largest system size handled by a dense symmetric eigensolve.
pub const DENSE_LIMIT: usize = 4000;

/// Eigenpairs of the undistorted system on the box with Dirichlet ends.
#[derive(Debug, Clone)]
pub struct BoxSpectrum {
    pub disc: Discretization,
    /// Ascending.
    pub energies: Vec<f64>,
    /// Interleaved two-component eigenvectors, `sum v^2 dx = 1`.
    pub vectors: Vec<Vec<f64>>,
    /// Whether every eigenpair of the matrix is present.
    pub complete: bool,
    /// Energy window `[lo, hi)` the pairs were restricted to.
    pub window: Option<(f64, f64)>,
}

impl BoxSpectrum {
    /// Whether every eigenvalue in `[lo, hi]` is present.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.window.map_or(true, |(a, b)| a <= lo && hi < b)
    }

    /// `sum v_i phi_i dx` for an interleaved vector.
    pub fn coefficient(&self, k: usize, phi: &[f64]) -> f64 {
        self.vectors[k]
            .iter()
            .zip(phi)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * self.disc.dx
    }
}

pub fn system_matrix(m: &PotentialModel, disc: &Discretization) -> Result<BandMatrix<f64>> {
    Ok(discretize(m, disc, None)?.system().map(|v: Complex64| v.re))
}

/// All eigenpairs (dense, small systems) or those inside `window`.
pub fn eigendecompose_box(
    m: &PotentialModel,
    disc: &Discretization,
    window: Option<(f64, f64)>,
) -> Result<BoxSpectrum> {
    let a = system_matrix(m, disc)?;
    let n = a.n();
    let scale = 1.0 / disc.dx.sqrt();
    if n <= DENSE_LIMIT {
        let dense = DMatrix::from_fn(n, n, |i, j| a.get(i, j));
        let eig = SymmetricEigen::new(dense);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let keep = |e: f64| window.map_or(true, |(lo, hi)| e >= lo && e < hi);
        let (energies, vectors) = order
            .into_iter()
            .filter(|&k| keep(eig.eigenvalues[k]))
            .map(|k| {
                (
                    eig.eigenvalues[k],
                    eig.eigenvectors
                        .column(k)
                        .iter()
                        .map(|v| v * scale)
                        .collect(),
                )
            })
            .unzip();
        return Ok(BoxSpectrum {
            disc: *disc,
            energies,
            vectors,
            complete: window.is_none(),
            window,
        });
    }
    let (lo, hi) = window.ok_or_else(|| {
        Error::InvalidParameter(format!(
            "system of size {n} needs an energy window (dense limit {DENSE_LIMIT})"
        ))
    })?;
    let count = count_below(&a, hi) - count_below(&a, lo);
    log::debug!("box window [{lo}, {hi}) holds {count} eigenvalues of {n}");
    let energies = eigenvalues_in(&a, lo, hi, 1e-14 * (1.0 + lo.abs().max(hi.abs())));
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(energies.len());
    for &e in &energies {
        let v = inverse_iteration(&a, e, &vectors)?;
        vectors.push(v);
    }
    let vectors = vectors
        .into_iter()
        .map(|v| v.into_iter().map(|x| x * scale).collect())
        .collect();
    Ok(BoxSpectrum {
        disc: *disc,
        energies,
        vectors,
        complete: false,
        window: Some((lo, hi)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GaussianTanh;
    use rand::{Rng, SeedableRng};

    fn small() -> (PotentialModel, Discretization) {
        let m = GaussianTanh::default().model((-4.0, 4.0));
        let d = Discretization::with_left_cells(&m, 0.3, 160).unwrap();
        (m, d)
    }

    #[test]
    fn dense_spectrum_is_sorted_and_complete() {
        let (m, d) = small();
        let s = eigendecompose_box(&m, &d, None).unwrap();
        assert!(s.complete);
        assert!(s.energies.windows(2).all(|w| w[0] <= w[1]));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 2 * d.n;
        for _ in 0..3 {
            let probe: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut rebuilt = vec![0.0; n];
            let mut parseval = 0.0;
            for k in 0..s.energies.len() {
                let c = s.coefficient(k, &probe);
                parseval += c * c;
                for (r, v) in rebuilt.iter_mut().zip(&s.vectors[k]) {
                    *r += c * v;
                }
            }
            let err = rebuilt
                .iter()
                .zip(&probe)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-8, "{err}");
            let norm2 = probe.iter().map(|v| v * v).sum::<f64>() * d.dx;
            assert!((parseval - norm2).abs() < 1e-10 * norm2);
        }
    }

    #[test]
    fn windowed_route_matches_dense() {
        let (m, d) = small();
        let full = eigendecompose_box(&m, &d, None).unwrap();
        let (lo, hi) = (-0.3, 0.1);
        let a = system_matrix(&m, &d).unwrap();
        let energies = eigenvalues_in(&a, lo, hi, 1e-13);
        let dense: Vec<f64> = full
            .energies
            .iter()
            .copied()
            .filter(|e| *e >= lo && *e < hi)
            .collect();
        assert_eq!(energies.len(), dense.len());
        for (x, y) in energies.iter().zip(&dense) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn large_system_without_window_is_refused() {
        let m = crate::model::default_model();
        let d = Discretization::new(&m, 0.05, 1.0).unwrap();
        assert!(eigendecompose_box(&m, &d, None).is_err());
        let s = eigendecompose_box(&m, &d, Some((-0.02, 0.0))).unwrap();
        assert!(!s.energies.is_empty());
        let norm: f64 = s.vectors[0].iter().map(|v| v * v).sum::<f64>() * d.dx;
        assert!((norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lowest_eigenvalues_converge_at_fourth_order() {
        // lifted dissociative level and a wide box so the lowest states are
        // confined well away from the ends
        let m = GaussianTanh {
            v2_offset: 2.0,
            ..GaussianTanh::default()
        }
        .model((-5.0, 3.0));
        let levels: Vec<Vec<f64>> = [300usize, 600, 1200]
            .iter()
            .map(|&n| {
                let d = Discretization::with_left_cells(&m, 0.3, n).unwrap();
                let a = system_matrix(&m, &d).unwrap();
                eigenvalues_in(&a, -2.0, 0.0, 1e-14)[..2].to_vec()
            })
            .collect();
        for k in 0..2 {
            let order = ((levels[0][k] - levels[1][k]) / (levels[1][k] - levels[2][k]))
                .abs()
                .log2();
            assert!(order >= 3.5, "level {k}: order {order} {levels:?}");
        }
    }
}
