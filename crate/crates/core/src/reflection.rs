//! Revealed technological advantage, the binary specialization matrix, the
//! method of reflection and its eigenvector variant.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::corpus::{RegionTechMatrix, TechnologyId};
use crate::error::{Error, Result};
use crate::stats;

pub const DEFAULT_ITERATIONS: usize = 20;
pub const DEFAULT_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RtaMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<TechnologyId>,
    values: Vec<f64>,
}

impl RtaMatrix {
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols.len() + c]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Location quotient of every (region, technology) cell. Cells in a zero
/// row or column get 0.
pub fn rta(m: &RegionTechMatrix) -> Result<RtaMatrix> {
    let total = m.total();
    if total == 0 {
        return Err(Error::ZeroMatrix);
    }
    let (nr, nc) = (m.n_rows(), m.n_cols());
    let mut row_sums = vec![0u64; nr];
    let mut col_sums = vec![0u64; nc];
    for r in 0..nr {
        for c in 0..nc {
            let v = m.get(r, c);
            row_sums[r] += v;
            col_sums[c] += v;
        }
    }
    let total = total as f64;
    let mut values = vec![0.0; nr * nc];
    for r in 0..nr {
        for c in 0..nc {
            let v = m.get(r, c);
            if v > 0 {
                let tech_share = v as f64 / col_sums[c] as f64;
                let region_share = row_sums[r] as f64 / total;
                values[r * nc + c] = tech_share / region_share;
            }
        }
    }
    Ok(RtaMatrix { rows: m.rows.clone(), cols: m.cols.clone(), values })
}

/// Binary region x technology specialization matrix with its marginals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<TechnologyId>,
    cells: Vec<u8>,
    /// Row sums, one per region.
    pub diversity: Vec<u32>,
    /// Column sums, one per technology.
    pub ubiquity: Vec<u32>,
}

impl IncidenceMatrix {
    /// Builds from row-major 0/1 cells; any non-zero entry counts as 1.
    pub fn from_cells(rows: Vec<String>, cols: Vec<TechnologyId>, cells: &[u8]) -> Self {
        assert_eq!(rows.len() * cols.len(), cells.len(), "incidence shape mismatch");
        let cells: Vec<u8> = cells.iter().map(|&v| u8::from(v != 0)).collect();
        let (nr, nc) = (rows.len(), cols.len());
        let mut diversity = vec![0u32; nr];
        let mut ubiquity = vec![0u32; nc];
        for r in 0..nr {
            for c in 0..nc {
                let v = u32::from(cells[r * nc + c]);
                diversity[r] += v;
                ubiquity[c] += v;
            }
        }
        IncidenceMatrix { rows, cols, cells, diversity, ubiquity }
    }

    /// Unlabelled matrix, handy for tests and the C ABI.
    pub fn from_dense(n_rows: usize, n_cols: usize, cells: &[u8]) -> Self {
        let rows = (0..n_rows).map(|r| format!("r{r:06}")).collect();
        let cols = (0..n_cols).map(|c| TechnologyId::new(format!("c{c:06}"))).collect();
        Self::from_cells(rows, cols, cells)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cells[r * self.cols.len() + c] != 0
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// True if some region or technology has no link.
    pub fn has_degenerate(&self) -> bool {
        self.diversity.contains(&0) || self.ubiquity.contains(&0)
    }

    /// Repeatedly removes empty rows and columns. Returns the pruned matrix
    /// together with the dropped region and technology labels.
    pub fn pruned(&self) -> (IncidenceMatrix, Vec<String>, Vec<TechnologyId>) {
        let mut keep_r: Vec<bool> = vec![true; self.n_rows()];
        let mut keep_c: Vec<bool> = vec![true; self.n_cols()];
        loop {
            let mut changed = false;
            for r in 0..self.n_rows() {
                if keep_r[r] && !(0..self.n_cols()).any(|c| keep_c[c] && self.get(r, c)) {
                    keep_r[r] = false;
                    changed = true;
                }
            }
            for c in 0..self.n_cols() {
                if keep_c[c] && !(0..self.n_rows()).any(|r| keep_r[r] && self.get(r, c)) {
                    keep_c[c] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let rows: Vec<usize> = (0..self.n_rows()).filter(|&r| keep_r[r]).collect();
        let cols: Vec<usize> = (0..self.n_cols()).filter(|&c| keep_c[c]).collect();
        let cells: Vec<u8> = rows.iter().flat_map(|&r| cols.iter().map(move |&c| u8::from(self.get(r, c)))).collect();
        let pruned = IncidenceMatrix::from_cells(
            rows.iter().map(|&r| self.rows[r].clone()).collect(),
            cols.iter().map(|&c| self.cols[c].clone()).collect(),
            &cells,
        );
        let dropped_r = (0..self.n_rows()).filter(|&r| !keep_r[r]).map(|r| self.rows[r].clone()).collect();
        let dropped_c = (0..self.n_cols()).filter(|&c| !keep_c[c]).map(|c| self.cols[c].clone()).collect();
        (pruned, dropped_r, dropped_c)
    }
}

/// Strict `RTA > threshold` specialization.
pub fn incidence(rta: &RtaMatrix, threshold: f64) -> IncidenceMatrix {
    let cells: Vec<u8> = rta.values.iter().map(|&v| u8::from(v > threshold)).collect();
    IncidenceMatrix::from_cells(rta.rows.clone(), rta.cols.clone(), &cells)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KciResult {
    pub regions: Vec<String>,
    pub technologies: Vec<TechnologyId>,
    /// Region vector after the last iteration (not standardized).
    pub region_scores: Vec<f64>,
    /// Technology vector after the last iteration (not standardized).
    pub tech_raw: Vec<f64>,
    /// `tech_raw` z-standardized.
    pub tech_scores: Vec<f64>,
    pub iterations: usize,
    pub dropped_regions: Vec<String>,
    pub dropped_technologies: Vec<TechnologyId>,
}

/// Method of reflection: regions average the previous technology vector
/// over their specializations, technologies average the previous region
/// vector over the regions specialized in them.
pub fn method_of_reflection(m: &IncidenceMatrix, iterations: usize) -> Result<KciResult> {
    let (m, dropped_regions, dropped_technologies) = m.pruned();
    if m.n_rows() == 0 || m.n_cols() == 0 {
        return Err(Error::EmptyIncidence);
    }
    let (region_scores, tech_raw) = reflect(&m, iterations);
    let tech_scores = stats::z_standardize(&tech_raw);
    Ok(KciResult {
        regions: m.rows.clone(),
        technologies: m.cols.clone(),
        region_scores,
        tech_raw,
        tech_scores,
        iterations,
        dropped_regions,
        dropped_technologies,
    })
}

/// Raw reflection on a matrix without empty rows or columns.
fn reflect(m: &IncidenceMatrix, iterations: usize) -> (Vec<f64>, Vec<f64>) {
    let nc = m.n_cols();
    let mut region_links: Vec<Vec<usize>> = vec![Vec::new(); m.n_rows()];
    let mut tech_links: Vec<Vec<usize>> = vec![Vec::new(); nc];
    for (i, _) in m.cells.iter().enumerate().filter(|(_, &v)| v != 0) {
        region_links[i / nc].push(i % nc);
        tech_links[i % nc].push(i / nc);
    }
    let mut kr: Vec<f64> = m.diversity.iter().map(|&d| f64::from(d)).collect();
    let mut kc: Vec<f64> = m.ubiquity.iter().map(|&u| f64::from(u)).collect();
    for _ in 0..iterations {
        let next_r: Vec<f64> =
            region_links.iter().map(|cs| cs.iter().map(|&c| kc[c]).sum::<f64>() / cs.len() as f64).collect();
        let next_c: Vec<f64> =
            tech_links.iter().map(|rs| rs.iter().map(|&r| kr[r]).sum::<f64>() / rs.len() as f64).collect();
        kr = next_r;
        kc = next_c;
    }
    (kr, kc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenComplexity {
    pub technologies: Vec<TechnologyId>,
    /// Second eigenvector, sign-oriented and z-standardized.
    pub tech_scores: Vec<f64>,
    pub eigenvalue: f64,
    /// Full spectrum of B, descending.
    pub spectrum: Vec<f64>,
    pub eigenvalue_rank: usize,
}

/// Technology-space matrix `B[c][c'] = sum_r M[r][c] M[r][c'] / (ubiquity_c * diversity_r)`.
pub fn technology_space(m: &IncidenceMatrix) -> DMatrix<f64> {
    let nc = m.n_cols();
    let mut b = DMatrix::zeros(nc, nc);
    for r in 0..m.n_rows() {
        if m.diversity[r] == 0 {
            continue;
        }
        let techs: Vec<usize> = (0..nc).filter(|&c| m.get(r, c)).collect();
        let w = 1.0 / f64::from(m.diversity[r]);
        for &a in &techs {
            for &b2 in &techs {
                b[(a, b2)] += w;
            }
        }
    }
    for c in 0..nc {
        if m.ubiquity[c] > 0 {
            let u = f64::from(m.ubiquity[c]);
            b.row_mut(c).iter_mut().for_each(|v| *v /= u);
        }
    }
    b
}

/// Eigenvector of `B` for its second-largest eigenvalue.
///
/// `B = U^-1 S` with `S` symmetric and `U` the diagonal of ubiquities, so it
/// is similar to the symmetric `U^-1/2 S U^-1/2` and its spectrum is real.
pub fn eigen_complexity(m: &IncidenceMatrix) -> Result<EigenComplexity> {
    let (m, _, _) = m.pruned();
    let nc = m.n_cols();
    if nc < 2 {
        return Err(Error::TooFewTechnologies(nc));
    }
    let b = technology_space(&m);
    let scale: Vec<f64> = m.ubiquity.iter().map(|&u| f64::from(u).sqrt()).collect();
    // U^1/2 B U^-1/2 = U^-1/2 S U^-1/2
    let sym = DMatrix::from_fn(nc, nc, |i, j| scale[i] * b[(i, j)] / scale[j]);
    let sym = (&sym + sym.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..nc).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let spectrum: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let tol = 1e-9 * spectrum[0].abs().max(1.0);
    let separated_above = spectrum[0] - spectrum[1] > tol;
    let separated_below = nc < 3 || spectrum[1] - spectrum[2] > tol;
    if !(separated_above && separated_below) {
        return Err(Error::DegenerateSpectrum(spectrum));
    }
    let v = eig.eigenvectors.column(order[1]);
    let mut vec: Vec<f64> = (0..nc).map(|i| v[i] / scale[i]).collect();

    let kci = method_of_reflection(&m, DEFAULT_ITERATIONS)?;
    let flip = match stats::spearman(&vec, &kci.tech_scores) {
        Ok(rho) if rho != 0.0 => rho < 0.0,
        // No rank information: make the largest-magnitude entry positive.
        _ => {
            let big = vec.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap_or(0.0);
            big < 0.0
        }
    };
    if flip {
        vec.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(EigenComplexity {
        technologies: m.cols.clone(),
        tech_scores: stats::z_standardize(&vec),
        eigenvalue: spectrum[1],
        spectrum,
        eigenvalue_rank: 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SpatialLevel;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn counts(nr: usize, nc: usize, v: &[u64]) -> RegionTechMatrix {
        RegionTechMatrix::from_counts(
            (0..nr).map(|r| format!("R{r:03}")).collect(),
            (0..nc).map(|c| TechnologyId::new(format!("T{c:03}"))).collect(),
            SpatialLevel::Fine,
            v.to_vec(),
        )
    }

    #[test]
    fn uniform_rta_is_one() {
        let r = rta(&counts(2, 2, &[2, 2, 2, 2])).unwrap();
        assert!(r.values().iter().all(|&v| v == 1.0));
        let m = incidence(&r, 1.0);
        assert!(m.cells().iter().all(|&v| v == 0));
        assert!(m.has_degenerate());
    }

    #[test]
    fn diagonal_rta() {
        let r = rta(&counts(2, 2, &[4, 0, 0, 4])).unwrap();
        assert_eq!(r.values(), &[2.0, 0.0, 0.0, 2.0]);
        let m = incidence(&r, 1.0);
        assert_eq!(m.cells(), &[1, 0, 0, 1]);
        assert_eq!(m.diversity, vec![1, 1]);
        assert_eq!(m.ubiquity, vec![1, 1]);
        assert_eq!(incidence(&r, 0.5).cells(), &[1, 0, 0, 1]);
    }

    #[test]
    fn zero_matrix_rejected() {
        assert!(matches!(rta(&counts(2, 2, &[0; 4])), Err(Error::ZeroMatrix)));
    }

    #[test]
    fn rta_matches_cell_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v: Vec<u64> = (0..35).map(|_| rng.gen_range(0..9)).collect();
        let m = counts(5, 7, &v);
        let r = rta(&m).unwrap();
        let total: f64 = v.iter().sum::<u64>() as f64;
        for i in 0..5 {
            for j in 0..7 {
                let x = v[i * 7 + j] as f64;
                let col: f64 = (0..5).map(|k| v[k * 7 + j] as f64).sum();
                let row: f64 = (0..7).map(|k| v[i * 7 + k] as f64).sum();
                let expect = if x == 0.0 { 0.0 } else { (x / col) / (row / total) };
                assert!((r.get(i, j) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rta_scale_invariant() {
        let base = counts(3, 3, &[1, 2, 0, 3, 1, 1, 0, 4, 2]);
        let scaled = counts(3, 3, &[7, 14, 0, 21, 7, 7, 0, 28, 14]);
        let (a, b) = (rta(&base).unwrap(), rta(&scaled).unwrap());
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_reflection_ties() {
        let m = IncidenceMatrix::from_dense(2, 2, &[1, 0, 0, 1]);
        let k = method_of_reflection(&m, 20).unwrap();
        assert_eq!(k.tech_raw, vec![1.0, 1.0]);
        assert_eq!(k.region_scores, vec![1.0, 1.0]);
        assert_eq!(k.tech_scores, vec![0.0, 0.0]);
    }

    #[test]
    fn first_iteration_by_hand() {
        let m = IncidenceMatrix::from_dense(2, 2, &[1, 1, 0, 1]);
        let k = method_of_reflection(&m, 1).unwrap();
        assert_eq!(k.tech_raw, vec![2.0, 1.5]);
        assert!(k.tech_scores[0] > k.tech_scores[1]);
        let k0 = method_of_reflection(&m, 0).unwrap();
        assert_eq!(k0.tech_raw, vec![1.0, 2.0]);
        assert_eq!(k0.region_scores, vec![2.0, 1.0]);
    }

    #[test]
    fn degenerate_rows_and_columns_dropped() {
        // region 2 and technology 2 have no links; region 1's only link is
        // to technology 1 which survives.
        let m = IncidenceMatrix::from_dense(3, 3, &[1, 1, 0, 0, 1, 0, 0, 0, 0]);
        let k = method_of_reflection(&m, 2).unwrap();
        assert_eq!(k.regions.len(), 2);
        assert_eq!(k.technologies.len(), 2);
        assert_eq!(k.dropped_regions, vec!["r000002".to_string()]);
        assert_eq!(k.dropped_technologies, vec![TechnologyId::new("c000002")]);
        let empty = IncidenceMatrix::from_dense(2, 2, &[0; 4]);
        assert!(matches!(method_of_reflection(&empty, 20), Err(Error::EmptyIncidence)));
    }

    #[test]
    fn identity_spectrum_is_degenerate() {
        let m = IncidenceMatrix::from_dense(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1]);
        match eigen_complexity(&m) {
            Err(Error::DegenerateSpectrum(s)) => assert!(s.iter().all(|v| (v - 1.0).abs() < 1e-12)),
            other => panic!("expected degenerate spectrum, got {other:?}"),
        }
    }

    #[test]
    fn single_technology_rejected() {
        let m = IncidenceMatrix::from_dense(2, 1, &[1, 1]);
        assert!(matches!(eigen_complexity(&m), Err(Error::TooFewTechnologies(1))));
    }

    #[test]
    fn three_technology_chain_by_hand() {
        // B = [[1/2,1/2,0],[1/4,1/2,1/4],[0,1/2,1/2]], spectrum {1, 1/2, 0};
        // the 1/2 eigenvector is (1, 0, -1): the shared technology sits
        // between the two outer ones.
        let m = IncidenceMatrix::from_dense(2, 3, &[1, 1, 0, 0, 1, 1]);
        let b = technology_space(&m);
        let expect = [[0.5, 0.5, 0.0], [0.25, 0.5, 0.25], [0.0, 0.5, 0.5]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((b[(i, j)] - expect[i][j]).abs() < 1e-15);
            }
        }
        let e = eigen_complexity(&m).unwrap();
        assert!((e.spectrum[0] - 1.0).abs() < 1e-12);
        assert!((e.eigenvalue - 0.5).abs() < 1e-12);
        assert!(e.spectrum[2].abs() < 1e-12);
        let s = &e.tech_scores;
        assert!(s[1].abs() < 1e-9);
        assert!((s[0] + s[2]).abs() < 1e-9);
        assert!((s[0].abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn eigen_invariant_under_region_permutation() {
        let cells = [1, 1, 0, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0];
        let m = IncidenceMatrix::from_dense(5, 4, &cells);
        let perm = [3, 0, 4, 1, 2];
        let permuted: Vec<u8> = perm.iter().flat_map(|&r| cells[r * 4..r * 4 + 4].to_vec()).collect();
        let p = IncidenceMatrix::from_dense(5, 4, &permuted);
        let (a, b) = (eigen_complexity(&m).unwrap(), eigen_complexity(&p).unwrap());
        for (x, y) in a.tech_scores.iter().zip(&b.tech_scores) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}
