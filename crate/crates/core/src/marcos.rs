//! MARCOS ranking over a Fermatean fuzzy decision matrix.
//!
//! Pipeline: [`normalize`] (cost columns are complemented), [`ideal_solutions`]
//! (per-column best and worst cells), [`weight_matrix`] (scalar multiple of each
//! cell by its criterion weight), [`weighted_scores`] (row sums of normalized
//! scores, plus the same sums for the weighted ideal rows), and [`utilities`].

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffn::{Ffn, WeightVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Benefit,
    Cost,
}

/// Rectangular alternatives x criteria grid of FFNs, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FfMatrix {
    alternatives: Vec<String>,
    criteria: Vec<String>,
    orientation: Vec<Orientation>,
    cells: Vec<Ffn>,
}

impl FfMatrix {
    pub fn new(
        alternatives: Vec<String>,
        criteria: Vec<String>,
        orientation: Vec<Orientation>,
        cells: Vec<Ffn>,
    ) -> Result<Self> {
        if criteria.len() != orientation.len() {
            return Err(Error::Shape(format!(
                "{} criteria but {} orientations",
                criteria.len(),
                orientation.len()
            )));
        }
        if cells.len() != alternatives.len() * criteria.len() {
            return Err(Error::Shape(format!(
                "{} cells for a {}x{} matrix",
                cells.len(),
                alternatives.len(),
                criteria.len()
            )));
        }
        Ok(FfMatrix {
            alternatives,
            criteria,
            orientation,
            cells,
        })
    }

    /// Builds a matrix with generated labels (`R1..`, `C1..`).
    pub fn from_rows(rows: Vec<Vec<Ffn>>, orientation: Vec<Orientation>) -> Result<Self> {
        let cols = orientation.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::Shape(format!(
                "row {i} has {} cells, expected {cols}",
                r.len()
            )));
        }
        let alternatives = (1..=rows.len()).map(|i| format!("R{i}")).collect();
        let criteria = (1..=cols).map(|j| format!("C{j}")).collect();
        FfMatrix::new(alternatives, criteria, orientation, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.alternatives.len()
    }

    pub fn cols(&self) -> usize {
        self.criteria.len()
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn criteria(&self) -> &[String] {
        &self.criteria
    }

    pub fn orientation(&self) -> &[Orientation] {
        &self.orientation
    }

    pub fn get(&self, i: usize, j: usize) -> Ffn {
        self.cells[i * self.cols() + j]
    }

    pub fn row(&self, i: usize) -> &[Ffn] {
        let c = self.cols();
        &self.cells[i * c..(i + 1) * c]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = Ffn> + '_ {
        (0..self.rows()).map(move |i| self.get(i, j))
    }

    pub fn cells(&self) -> &[Ffn] {
        &self.cells
    }

    fn map_cells(&self, f: impl Fn(usize, Ffn) -> Ffn) -> Vec<Ffn> {
        let c = self.cols();
        self.cells
            .iter()
            .enumerate()
            .map(|(k, cell)| f(k % c, *cell))
            .collect()
    }

    fn with_cells(&self, cells: Vec<Ffn>, orientation: Vec<Orientation>) -> FfMatrix {
        FfMatrix {
            alternatives: self.alternatives.clone(),
            criteria: self.criteria.clone(),
            orientation,
            cells,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MarcosOptions {
    /// Associate `U-` with the anti-ideal sum and `U+` with the ideal sum,
    /// as in the original crisp method. The default follows the reverse
    /// labelling. Final utilities and the order are identical either way.
    pub standard_marcos: bool,
}

/// Per-alternative scores, utility degrees and the induced order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarcosResult {
    pub s: Vec<f64>,
    pub s_pis: f64,
    pub s_nis: f64,
    pub u_minus: Vec<f64>,
    pub u_plus: Vec<f64>,
    pub f_u_plus: Vec<f64>,
    pub f_u_minus: Vec<f64>,
    pub f_u: Vec<f64>,
    /// Alternative indices, best first.
    pub order: Vec<usize>,
}

impl MarcosResult {
    /// 1-based rank of each alternative.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.order.len()];
        for (pos, &i) in self.order.iter().enumerate() {
            ranks[i] = pos + 1;
        }
        ranks
    }
}

/// Complements every cell of a cost column; all columns become benefit.
pub fn normalize(m: &FfMatrix) -> FfMatrix {
    let cells = m.map_cells(|j, cell| match m.orientation[j] {
        Orientation::Benefit => cell,
        Orientation::Cost => cell.complement(),
    });
    m.with_cells(cells, vec![Orientation::Benefit; m.cols()])
}

/// Column-wise best (`pis`) and worst (`nis`) cells under [`Ffn::rank_cmp`].
pub fn ideal_solutions(m: &FfMatrix) -> Result<(Vec<Ffn>, Vec<Ffn>)> {
    if m.rows() == 0 {
        return Err(Error::Shape("matrix has no alternatives".into()));
    }
    let mut pis = Vec::with_capacity(m.cols());
    let mut nis = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        let mut best = m.get(0, j);
        let mut worst = best;
        for cell in m.column(j).skip(1) {
            if cell.rank_cmp(&best) == Ordering::Greater {
                best = cell;
            }
            if cell.rank_cmp(&worst) == Ordering::Less {
                worst = cell;
            }
        }
        pis.push(best);
        nis.push(worst);
    }
    Ok((pis, nis))
}

fn check_weights(cols: usize, w: &WeightVector) -> Result<()> {
    if w.len() != cols {
        return Err(Error::Shape(format!(
            "{} weights for {} criteria",
            w.len(),
            cols
        )));
    }
    Ok(())
}

/// Scales each cell by its criterion weight.
pub fn weight_matrix(m: &FfMatrix, w: &WeightVector) -> Result<FfMatrix> {
    check_weights(m.cols(), w)?;
    let cells = m.map_cells(|j, cell| cell.scale_unchecked(w[j]));
    Ok(m.with_cells(cells, m.orientation.clone()))
}

/// Row sums of normalized scores of the weighted matrix, and the sums for
/// the weighted ideal and anti-ideal rows.
pub fn weighted_scores(
    weighted: &FfMatrix,
    pis: &[Ffn],
    nis: &[Ffn],
    w: &WeightVector,
) -> Result<(Vec<f64>, f64, f64)> {
    check_weights(weighted.cols(), w)?;
    if pis.len() != weighted.cols() || nis.len() != weighted.cols() {
        return Err(Error::Shape("ideal rows do not match the criteria".into()));
    }
    let row_sum = |row: &[Ffn]| row.iter().map(|c| c.normalized_score()).sum::<f64>();
    let s = (0..weighted.rows())
        .map(|i| row_sum(weighted.row(i)))
        .collect();
    let reference = |ideal: &[Ffn]| {
        ideal
            .iter()
            .zip(w.iter())
            .map(|(c, wj)| c.scale_unchecked(wj).normalized_score())
            .sum::<f64>()
    };
    Ok((s, reference(pis), reference(nis)))
}

/// Utility degrees, utility functions and the final ranking.
pub fn utilities(
    s: &[f64],
    s_pis: f64,
    s_nis: f64,
    options: MarcosOptions,
) -> Result<MarcosResult> {
    if s_pis.is_nan() || s_nis.is_nan() || s_pis <= 0.0 || s_nis <= 0.0 {
        return Err(Error::DegenerateReference(format!(
            "reference sums must be positive (ideal {s_pis}, anti-ideal {s_nis})"
        )));
    }
    if let Some((i, v)) = s.iter().enumerate().find(|(_, v)| v.is_nan() || **v <= 0.0) {
        return Err(Error::DegenerateReference(format!(
            "alternative {i} has non-positive score sum {v}"
        )));
    }
    let (minus_ref, plus_ref) = if options.standard_marcos {
        (s_nis, s_pis)
    } else {
        (s_pis, s_nis)
    };
    let n = s.len();
    let mut out = MarcosResult {
        s: s.to_vec(),
        s_pis,
        s_nis,
        u_minus: Vec::with_capacity(n),
        u_plus: Vec::with_capacity(n),
        f_u_plus: Vec::with_capacity(n),
        f_u_minus: Vec::with_capacity(n),
        f_u: Vec::with_capacity(n),
        order: Vec::new(),
    };
    // U-/(U- + U+) reduces to a ratio of the reference sums, so both
    // utility functions and the denominator are shared by every row.
    let fp = plus_ref / (minus_ref + plus_ref);
    let fm = minus_ref / (minus_ref + plus_ref);
    let denom = 1.0 + (1.0 - fp) / fp + (1.0 - fm) / fm;
    for &si in s {
        let um = si / minus_ref;
        let up = si / plus_ref;
        let f = (up + um) / denom;
        out.u_minus.push(um);
        out.u_plus.push(up);
        out.f_u_plus.push(fp);
        out.f_u_minus.push(fm);
        out.f_u.push(f);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        out.f_u[b]
            .total_cmp(&out.f_u[a])
            .then_with(|| s[b].total_cmp(&s[a]))
            .then_with(|| a.cmp(&b))
    });
    out.order = order;
    Ok(out)
}

/// All MARCOS intermediates for one weight vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarcosRun {
    pub normalized: FfMatrix,
    pub pis: Vec<Ffn>,
    pub nis: Vec<Ffn>,
    pub weighted: FfMatrix,
    pub result: MarcosResult,
}

/// Ranks the alternatives of an aggregated (un-normalized) matrix.
pub fn rank_matrix(
    aggregated: &FfMatrix,
    w: &WeightVector,
    options: MarcosOptions,
) -> Result<MarcosRun> {
    let normalized = normalize(aggregated);
    let (pis, nis) = ideal_solutions(&normalized)?;
    let weighted = weight_matrix(&normalized, w)?;
    let (s, s_pis, s_nis) = weighted_scores(&weighted, &pis, &nis, w)?;
    let result = utilities(&s, s_pis, s_nis, options)?;
    Ok(MarcosRun {
        normalized,
        pis,
        nis,
        weighted,
        result,
    })
}

/// End-to-end ranking of a decision problem under the given weights.
pub fn rank(
    problem: &crate::problem::DecisionProblem,
    weights: &crate::piprecia::WeightBundle,
    aggregator: crate::ffn::Aggregator,
    options: MarcosOptions,
) -> Result<MarcosResult> {
    let prepared = crate::pipeline::Prepared::new(problem, aggregator)?;
    Ok(rank_matrix(&prepared.aggregated, &weights.integrated, options)?.result)
}
