//! Brute-force cohomology of cyclic actions by exact linear algebra
//! over F_p.
//!
//! Nothing here trusts a closed formula: dimensions are computed as
//! ranks and nullities of explicitly assembled matrices (trace matrix,
//! 1 - sigma matrix) on a finite window of monomial vector fields, with
//! a stabilization re-run at enlarged window sizes so that truncation
//! artifacts are detected instead of reported.

use crate::error::{Error, Result};
use crate::node::CyclicNodeAction;
use crate::series::{addm, invm, mulm, subm, TruncatedSeries, Valuation};
use crate::smooth::{CyclicSmoothAction, VectorField};

/// A dense matrix over F_p with exact Gaussian elimination.
#[derive(Debug, Clone)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zero(p: u64, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    /// Columns are stacked left to right from the given vectors.
    pub fn from_columns(p: u64, rows: usize, columns: &[Vec<u64>]) -> FpMatrix {
        let mut m = FpMatrix::zero(p, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, &v) in col.iter().enumerate().take(rows) {
                m.set(r, c, v);
            }
        }
        m
    }

    /// Row-reduce in place; returns the pivot column of each pivot row.
    fn eliminate(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    let a = self.get(row, c);
                    let b = self.get(pr, c);
                    self.set(row, c, b);
                    self.set(pr, c, a);
                }
            }
            let inv = invm(p, self.get(row, col)).expect("pivot is nonzero");
            for c in 0..self.cols {
                let v = mulm(p, self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) != 0 {
                    let f = self.get(r, col);
                    for c in 0..self.cols {
                        let v = subm(p, self.get(r, c), mulm(p, f, self.get(row, c)));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate().len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right nullspace, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut m = self.clone();
        let pivots = m.eliminate();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = subm(p, 0, m.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of A x = b, if any.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>> {
        if b.len() != self.rows {
            return Err(Error::internal(format!(
                "solve: rhs length {} vs {} rows",
                b.len(),
                self.rows
            )));
        }
        let p = self.p;
        let mut aug = FpMatrix::zero(p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r] % p);
        }
        let pivots = aug.eliminate();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u64; self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug.get(row, self.cols);
        }
        Ok(Some(x))
    }

    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; self.rows];
        for r in 0..self.rows {
            let mut acc = 0u64;
            for c in 0..self.cols {
                acc = addm(p, acc, mulm(p, self.get(r, c), x[c] % p));
            }
            out[r] = acc;
        }
        out
    }
}

/// Which module of vector fields a brute-force run works in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleShape {
    /// k[[x]] dx-duals: monomials x^i (d/dx), i >= 0.
    Smooth,
    /// x k[[x]] (d/dx) + y k[[y]] (d/dy): two branches, i >= 1 each.
    Node,
}

/// A finite window of monomial vector fields together with the matrices
/// of the generator action and of the trace, with columns computed to an
/// ambient precision strictly larger than the window.
///
/// The ambient buffer is what makes the two matrices trustworthy: the
/// trace raises valuation by at most the buffer, so a window field with
/// a nonzero trace shows that trace inside the ambient rows, and the
/// coboundary columns are exact to ambient precision.
#[derive(Debug)]
pub struct TruncatedModule {
    pub shape: ModuleShape,
    pub window: usize,
    pub ambient: usize,
    /// Matrix of 1 - sigma on window basis vectors, ambient rows.
    pub one_minus_sigma: FpMatrix,
    /// Matrix of the trace on window basis vectors, ambient rows.
    pub trace: FpMatrix,
}

fn field_to_column(f: &TruncatedSeries, rows: usize) -> Result<Vec<u64>> {
    if f.precision() < rows {
        return Err(Error::precision(
            f.precision(),
            format!("need {rows} coefficients for the oracle column"),
        ));
    }
    Ok((0..rows).map(|i| f.coeff(i)).collect())
}

/// Assemble the action data of a smooth-branch window: basis x^i d/dx for
/// i in lo..window.
fn smooth_columns(
    a: &CyclicSmoothAction,
    lo: usize,
    window: usize,
    ambient: usize,
) -> Result<(Vec<Vec<u64>>, Vec<Vec<u64>>)> {
    Ok((
        a.monomial_one_minus_sigma_columns(lo, window, ambient)?,
        a.monomial_trace_columns(lo, window, ambient)?,
    ))
}

impl TruncatedModule {
    pub fn assemble_smooth(a: &CyclicSmoothAction, window: usize, ambient: usize) -> Result<Self> {
        let (oms, tr) = smooth_columns(a, 0, window, ambient)?;
        Ok(TruncatedModule {
            shape: ModuleShape::Smooth,
            window,
            ambient,
            one_minus_sigma: FpMatrix::from_columns(a.p(), ambient, &oms),
            trace: FpMatrix::from_columns(a.p(), ambient, &tr),
        })
    }

    pub fn assemble_node(a: &CyclicNodeAction, window: usize, ambient: usize) -> Result<Self> {
        let ax = a.branch_x();
        let ay = a.branch_y();
        let (oms_x, tr_x) = smooth_columns(ax, 1, window + 1, ambient)?;
        let (oms_y, tr_y) = smooth_columns(ay, 1, window + 1, ambient)?;
        // Block-diagonal stacking: x-branch coefficients then y-branch.
        let p = a.p();
        let n_cols = oms_x.len() + oms_y.len();
        let stack = |top: &[Vec<u64>], bottom: &[Vec<u64>]| {
            let mut m = FpMatrix::zero(p, 2 * ambient, n_cols);
            for (c, col) in top.iter().enumerate() {
                for (r, &v) in col.iter().enumerate() {
                    m.set(r, c, v);
                }
            }
            for (c, col) in bottom.iter().enumerate() {
                for (r, &v) in col.iter().enumerate() {
                    m.set(ambient + r, top.len() + c, v);
                }
            }
            m
        };
        Ok(TruncatedModule {
            shape: ModuleShape::Node,
            window,
            ambient,
            one_minus_sigma: stack(&oms_x, &oms_y),
            trace: stack(&tr_x, &tr_y),
        })
    }

    fn blocks(&self) -> usize {
        match self.shape {
            ModuleShape::Smooth => 1,
            ModuleShape::Node => 2,
        }
    }

    /// Rows per branch kept when cutting the matrices down to the
    /// quotient by z^N (degrees up to the window).
    fn quotient_rows(&self) -> usize {
        match self.shape {
            ModuleShape::Smooth => self.window,
            ModuleShape::Node => self.window + 1,
        }
    }

    /// Matrix rows cut down to the quotient by z^N.
    fn quotient_cut(&self, m: &FpMatrix) -> FpMatrix {
        let blocks = self.blocks();
        let block_rows = m.rows() / blocks;
        let keep = self.quotient_rows();
        let mut out = FpMatrix::zero(m.p(), blocks * keep, m.cols());
        for c in 0..m.cols() {
            for b in 0..blocks {
                for r in 0..keep.min(block_rows) {
                    out.set(b * keep + r, c, m.get(b * block_rows + r, c));
                }
            }
        }
        out
    }

    /// dim ker(trace) / im(1 - sigma) on the finite quotient by z^N,
    /// where z is the invariant norm parameter and the window is N times
    /// the group order.
    ///
    /// Both maps are linear over the invariants k[[z]], so the cut
    /// matrices are exactly the induced endomorphisms of the quotient;
    /// no truncation noise enters. On a finite module the two cyclic
    /// cohomology dimensions agree, and that equality is asserted as an
    /// internal cross-check before the value is returned.
    pub fn h1_quotient_dimension(&self) -> Result<usize> {
        let t = self.quotient_cut(&self.trace);
        let d = self.quotient_cut(&self.one_minus_sigma);
        let t_rank = t.rank();
        let d_rank = d.rank();
        let h1 = t.nullity().checked_sub(d_rank);
        let h0 = d.nullity().checked_sub(t_rank);
        match (h1, h0) {
            (Some(h1), Some(h0)) if h1 == h0 => Ok(h1),
            _ => Err(Error::internal(format!(
                "quotient cohomology self-duality violated: trace rank {t_rank}, \
                 coboundary rank {d_rank}, columns {}",
                t.cols()
            ))),
        }
    }
}

/// Sources of actions for the brute-force entry point.
pub enum OracleInput<'a> {
    Smooth(&'a CyclicSmoothAction),
    Node(&'a CyclicNodeAction),
}

/// Minimal z-valuation of theta over monomial fields x^i d/dx with
/// i in lo..hi.
fn theta_min_valuation(a: &CyclicSmoothAction, lo: usize, hi: usize) -> Result<usize> {
    let mut best: Option<usize> = None;
    for i in lo..hi.min(a.precision() / 2) {
        let phi = VectorField::new(TruncatedSeries::monomial(a.p(), i, 1, a.precision())?);
        if let Valuation::Finite(v) = a.theta(&phi)?.valuation() {
            best = Some(best.map_or(v, |b: usize| b.min(v)));
        }
    }
    best.ok_or_else(|| {
        Error::precision(a.precision(), "no theta value visible at this precision".to_string())
    })
}

/// dim of the invariant fields modulo traces for one branch: minimal
/// theta valuation of the module minus the valuation of its minimal
/// integral invariant field z^e / z'(x) d/dx, where e is the least
/// exponent making that field integral (and inside the branch module
/// when `lo` is 1).
fn invariants_mod_traces(a: &CyclicSmoothAction, lo: usize, hi: usize) -> Result<usize> {
    if !a.is_faithful() {
        return Err(Error::hypothesis(
            "cohomology oracle needs a faithful action on every branch".to_string(),
        ));
    }
    let g = a.group_order();
    let d = a.ramification_profile()?.different;
    let r = theta_min_valuation(a, lo, hi)?;
    let e = (d as usize + lo).div_ceil(g as usize);
    if r < e {
        return Err(Error::internal(format!(
            "theta image valuation {r} below the invariant lattice valuation {e}"
        )));
    }
    Ok(r - e)
}

fn run_once(input: &OracleInput, window: usize, ambient: usize) -> Result<usize> {
    let g = match input {
        OracleInput::Smooth(a) => a.group_order(),
        OracleInput::Node(a) => a.group_order(),
    } as usize;
    // Align the window to a multiple of the group order so the cut is a
    // quotient by a power of the invariant parameter z.
    let window = window.div_ceil(g) * g;
    let ambient = ambient.max(window + 1);
    let (module, correction) = match input {
        OracleInput::Smooth(a) => (
            TruncatedModule::assemble_smooth(a, window, ambient)?,
            invariants_mod_traces(a, 0, window)?,
        ),
        OracleInput::Node(a) => (
            TruncatedModule::assemble_node(a, window, ambient)?,
            invariants_mod_traces(a.branch_x(), 1, window)?
                + invariants_mod_traces(a.branch_y(), 1, window)?,
        ),
    };
    let quotient = module.h1_quotient_dimension()?;
    quotient.checked_sub(correction).ok_or_else(|| {
        Error::internal(format!(
            "quotient cohomology {quotient} below its invariants correction {correction}"
        ))
    })
}

/// H^1(G, M) = ker(Tr) / im(1 - sigma) for the cyclic group generated by
/// the action's generator.
///
/// Computed on the finite quotient M / z^N M (window = N times the group
/// order), whose cohomology exceeds that of M by exactly the dimension
/// of invariants modulo traces; that correction is measured from the
/// theta image. The count is re-computed on an enlarged window;
/// disagreement is a hard `StabilizationFailure`, never an average.
pub fn h1_dimension_bruteforce(
    input: &OracleInput,
    window: usize,
    ambient: usize,
) -> Result<usize> {
    let g = match input {
        OracleInput::Smooth(a) => a.group_order(),
        OracleInput::Node(a) => a.group_order(),
    } as usize;
    if ambient < window {
        return Err(Error::hypothesis(format!(
            "ambient precision {ambient} below window {window}"
        )));
    }
    let first = run_once(input, window, ambient)?;
    let second = run_once(input, window + g, ambient + 2 * g)?;
    if first != second {
        return Err(Error::StabilizationFailure { first, second });
    }
    Ok(first)
}

/// Default window/ambient pair for an action with different `d` and top
/// jump `m_top`: the buffer past the window absorbs the valuation spread
/// of traces and coboundaries so low-degree ranks are truncation-free.
pub fn default_window(d: u64, m_top: u64, p: u64) -> (usize, usize) {
    let window = (2 * d + 2 * p + 2) as usize;
    let buffer = (d + m_top + 1) as usize;
    (window, window + buffer)
}

/// Decide whether a 1-cocycle (given by its value on the generator) is a
/// coboundary: solve (1 - sigma) f = value on the quotient by z^N.
///
/// A cocycle value has trace zero, and on trace-zero elements
/// solvability on a large enough quotient is equivalent to solvability
/// in the full module; a value with a visibly nonzero trace is rejected
/// as not a cocycle at all.
pub fn cocycle_class_is_zero(
    input: &OracleInput,
    value_x: &TruncatedSeries,
    value_y: Option<&TruncatedSeries>,
    window: usize,
    ambient: usize,
) -> Result<bool> {
    let g = match input {
        OracleInput::Smooth(a) => a.group_order(),
        OracleInput::Node(a) => a.group_order(),
    } as usize;
    let window = window.div_ceil(g) * g;
    let ambient = ambient.max(window + 1);
    let trace_is_zero = |a: &CyclicSmoothAction, v: &TruncatedSeries| -> Result<bool> {
        let tr = a.trace(&VectorField::new(v.clone()))?;
        Ok(tr.series().is_zero())
    };
    let module = match input {
        OracleInput::Smooth(a) => {
            if !trace_is_zero(a, value_x)? {
                return Err(Error::hypothesis(
                    "cocycle value has nonzero trace".to_string(),
                ));
            }
            TruncatedModule::assemble_smooth(a, window, ambient)?
        }
        OracleInput::Node(a) => {
            let vy = value_y.ok_or_else(|| {
                Error::internal("cocycle value shape does not match module".to_string())
            })?;
            if !trace_is_zero(a.branch_x(), value_x)? || !trace_is_zero(a.branch_y(), vy)? {
                return Err(Error::hypothesis(
                    "cocycle value has nonzero trace".to_string(),
                ));
            }
            TruncatedModule::assemble_node(a, window, ambient)?
        }
    };
    let rows = module.quotient_rows();
    let mut rhs = field_to_column(value_x, rows)?;
    match (module.shape, value_y) {
        (ModuleShape::Node, Some(vy)) => rhs.extend(field_to_column(vy, rows)?),
        (ModuleShape::Smooth, None) => {}
        _ => return Err(Error::internal("cocycle value shape does not match module".to_string())),
    }
    Ok(module.quotient_cut(&module.one_minus_sigma).solve(&rhs)?.is_some())
}

/// Minimal valuation r such that the image of theta is z^r k[[z]], found
/// by sweeping theta over monomial fields; when 2m+1 = 0 mod p the
/// closed expression r = (2m+1)(p-1)/p is asserted against the sweep.
pub fn trace_image_principal_valuation(a: &CyclicSmoothAction) -> Result<usize> {
    let profile = a.ramification_profile()?;
    if profile.group_order != a.p() {
        return Err(Error::hypothesis("trace image sweep requires a faithful order-p action".to_string()));
    }
    let p = a.p();
    let m = profile
        .conductor
        .ok_or_else(|| Error::hypothesis("trivial action has no conductor".to_string()))?;
    let r = theta_min_valuation(a, 0, 2 * m as usize + 2)?;
    if (2 * m + 1) % p == 0 {
        let predicted = ((2 * m + 1) * (p - 1) / p) as usize;
        if r != predicted {
            return Err(Error::internal(format!(
                "trace image valuation {r} disagrees with closed expression {predicted}"
            )));
        }
    }
    Ok(r)
}
