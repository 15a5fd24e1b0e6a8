//! Cyclic p-group actions on the formal node Spec k[[x,y]]/(xy):
//! branch-wise conductor and different pairs, the H^1 dimension counts,
//! the first-order lifting solver for the smoothed node xy = eps, and
//! the relevability trichotomy.
//!
//! The first coordinate of every pair refers to the x-branch.

use crate::error::{Error, Result};
use crate::oracle::FpMatrix;
use crate::series::{norm_i64, subm, FpScalar, TruncatedSeries};
use crate::smooth::{linear_trace_zero_solve, CyclicSmoothAction, SmoothAutomorphism};

/// An automorphism of the node fixing both branches: sigma(x) = P0(x),
/// sigma(y) = P1(y).
#[derive(Debug, Clone)]
pub struct NodeAutomorphism {
    p: u64,
    p0: TruncatedSeries,
    p1: TruncatedSeries,
}

impl NodeAutomorphism {
    pub fn new(p: u64, p0: TruncatedSeries, p1: TruncatedSeries) -> Result<Self> {
        SmoothAutomorphism::new(p, p0.clone())?;
        SmoothAutomorphism::new(p, p1.clone())?;
        Ok(NodeAutomorphism { p, p0, p1 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn branch_x_series(&self) -> &TruncatedSeries {
        &self.p0
    }

    pub fn branch_y_series(&self) -> &TruncatedSeries {
        &self.p1
    }
}

/// Conductor and different pairs of a node action; `None` is an
/// infinite conductor (trivial branch image).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeProfile {
    pub p: u64,
    pub conductors: (Option<u64>, Option<u64>),
    pub differents: (u64, u64),
    pub image_orders: (u64, u64),
    pub group_order: u64,
}

/// Z/p^n acting on the node through branch restrictions.
#[derive(Debug, Clone)]
pub struct CyclicNodeAction {
    p: u64,
    n: u32,
    branch_x: CyclicSmoothAction,
    branch_y: CyclicSmoothAction,
    precision: usize,
}

impl CyclicNodeAction {
    pub fn new(p: u64, n: u32, generator: NodeAutomorphism, precision: usize) -> Result<Self> {
        let bx = CyclicSmoothAction::new(
            p,
            n,
            SmoothAutomorphism::new(p, generator.p0.clone())?,
            precision,
        )?;
        let by = CyclicSmoothAction::new(
            p,
            n,
            SmoothAutomorphism::new(p, generator.p1.clone())?,
            precision,
        )?;
        Ok(CyclicNodeAction { p, n, branch_x: bx, branch_y: by, precision })
    }

    /// Branch restrictions supplied directly as smooth actions (used for
    /// tower generators built elsewhere).
    pub fn from_branches(
        branch_x: CyclicSmoothAction,
        branch_y: CyclicSmoothAction,
    ) -> Result<Self> {
        if branch_x.p() != branch_y.p() {
            return Err(Error::ModulusMismatch(branch_x.p(), branch_y.p()));
        }
        if branch_x.n() != branch_y.n() {
            return Err(Error::data(format!(
                "branch actions with different abstract orders: p^{} vs p^{}",
                branch_x.n(),
                branch_y.n()
            )));
        }
        let p = branch_x.p();
        let n = branch_x.n();
        let precision = branch_x.precision().min(branch_y.precision());
        Ok(CyclicNodeAction { p, n, branch_x, branch_y, precision })
    }

    /// The order-p action of conductor pair (m, m'); `None` means a
    /// trivial branch (infinite conductor).
    pub fn standard_node_action(
        p: u64,
        m: Option<u64>,
        mp: Option<u64>,
        precision: usize,
    ) -> Result<Self> {
        let build = |c: Option<u64>| -> Result<CyclicSmoothAction> {
            match c {
                Some(m) => CyclicSmoothAction::standard_action(p, m, precision),
                None => CyclicSmoothAction::trivial(p, 1, precision),
            }
        };
        CyclicNodeAction::from_branches(build(m)?, build(mp)?)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn group_order(&self) -> u64 {
        self.p.pow(self.n)
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn branch_x(&self) -> &CyclicSmoothAction {
        &self.branch_x
    }

    pub fn branch_y(&self) -> &CyclicSmoothAction {
        &self.branch_y
    }

    pub fn profile(&self) -> Result<NodeProfile> {
        let px = self.branch_x.ramification_profile()?;
        let py = self.branch_y.ramification_profile()?;
        Ok(NodeProfile {
            p: self.p,
            conductors: (px.conductor, py.conductor),
            differents: (px.different, py.different),
            image_orders: (px.group_order, py.group_order),
            group_order: self.group_order(),
        })
    }
}

/// Numeric node data sufficient for classification, decoupled from
/// series so the global module can consume decorations directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLocalData {
    pub conductors: (Option<u64>, Option<u64>),
    pub differents: (u64, u64),
    pub image_orders: (u64, u64),
    pub group_order: u64,
}

impl NodeLocalData {
    pub fn from_profile(profile: &NodeProfile) -> NodeLocalData {
        NodeLocalData {
            conductors: profile.conductors,
            differents: profile.differents,
            image_orders: profile.image_orders,
            group_order: profile.group_order,
        }
    }
}

/// Whether the action lifts to the smoothed node, and with what freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelevabilityClass {
    Unconditional,
    Conditional,
    NonRelevable,
}

impl std::fmt::Display for RelevabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RelevabilityClass::Unconditional => "unconditional",
            RelevabilityClass::Conditional => "conditional",
            RelevabilityClass::NonRelevable => "non-relevable",
        };
        write!(f, "{s}")
    }
}

/// dim H^1(G, Hom(Omega, R)) for a faithful order-p action with finite
/// conductors (m, m'):
/// m + m' + 2 + floor(m/p) - ceil((2m+1)/p) + floor(m'/p) - ceil((2m'+1)/p).
pub fn h1_ext0_dimension(a: &CyclicNodeAction) -> Result<u64> {
    let p = a.p();
    let profile = a.profile()?;
    if a.group_order() != p || profile.image_orders != (p, p) {
        return Err(Error::hypothesis(
            "H^1 dimension formula needs a faithful order-p action on both branches".to_string(),
        ));
    }
    let (Some(m), Some(mp)) = profile.conductors else {
        return Err(Error::hypothesis(
            "H^1 dimension formula needs finite conductors on both branches".to_string(),
        ));
    };
    let term = |m: u64| -> i64 { (m / p) as i64 - ((2 * m + 1).div_ceil(p)) as i64 };
    let total = (m + mp + 2) as i64 + term(m) + term(mp);
    if total < 0 {
        return Err(Error::internal(format!("negative dimension {total}")));
    }
    Ok(total as u64)
}

/// a + a' where a = 0 iff the branch conductor is finite and m + 1 is
/// nonzero mod p, else 1.
pub fn phi_kernel_dimension(a: &CyclicNodeAction) -> Result<u64> {
    let p = a.p();
    let profile = a.profile()?;
    let branch = |c: Option<u64>| -> u64 {
        match c {
            Some(m) if (m + 1) % p != 0 => 0,
            _ => 1,
        }
    };
    Ok(branch(profile.conductors.0) + branch(profile.conductors.1))
}

/// Which branch of the node a branch-local query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    X,
    Y,
}

/// Decide whether the cocycle sigma |-> d/dx - sigma.(d/dx) is a
/// coboundary inside the positive-valuation fields of one branch, by
/// exact linear solve; when m + 1 = 0 mod p the explicit primitive
/// 1 - (1 - x^{m(p-1)})^{(m+1)/pm} is also produced and checked.
pub fn phi_cocycle_is_coboundary(a: &CyclicNodeAction, branch: Branch) -> Result<bool> {
    let action = match branch {
        Branch::X => a.branch_x(),
        Branch::Y => a.branch_y(),
    };
    let p = a.p();
    let profile = action.ramification_profile()?;
    let Some(m) = profile.conductor else {
        // Trivial branch image: the cocycle is identically zero.
        return Ok(true);
    };
    let d = profile.different;
    let g = profile.group_order as usize;
    // Window aligned to the group order: positive-valuation monomials up
    // to the window span the quotient of the branch module by a power of
    // the invariant parameter, where solvability of a trace-zero value
    // is equivalent to solvability in the full module.
    let window = ((2 * d + 2 * p + 2) as usize).div_ceil(g) * g;
    let ambient = (window + 2).max(window + (d as usize + 2).min(8));
    if ambient >= action.precision() {
        return Err(Error::precision(
            action.precision(),
            format!("cocycle solve needs precision above {ambient}"),
        ));
    }
    // Cocycle value on the generator: 1 - 1/sigma'(x), times d/dx.
    let ds = action.generator().series().derivative();
    let value = TruncatedSeries::one(p, ds.precision())?.sub(&ds.inverse()?)?;
    let cols = action.monomial_one_minus_sigma_columns(1, window + 1, ambient)?;
    let rows = window + 1;
    let matrix = FpMatrix::from_columns(p, rows, &cols);
    let rhs: Vec<u64> = (0..rows).map(|i| value.coeff(i)).collect();
    let solvable = matrix.solve(&rhs)?.is_some();
    if (m + 1) % p == 0 {
        // The closed primitive must certify solvability.
        let base = TruncatedSeries::one(p, action.precision())?
            .sub(&TruncatedSeries::monomial(p, (m * (p - 1)) as usize, 1, action.precision())?)?;
        let f = TruncatedSeries::one(p, action.precision())?
            .sub(&base.rational_power(((m + 1) / p) as i64, m)?)?;
        let phi = crate::smooth::VectorField::new(f.clone());
        let moved = action.generator().act_on_vector_field(&phi)?;
        let diff = f.truncate(moved.series().precision())?.sub(moved.series())?;
        let upto = diff.precision().min(value.precision());
        if !diff.agrees(&value.truncate(upto)?, upto)? {
            return Err(Error::internal(
                "closed primitive does not reproduce the cocycle value".to_string(),
            ));
        }
        if !solvable {
            return Err(Error::internal(
                "linear solve missed a cocycle primitive certified in closed form".to_string(),
            ));
        }
    }
    Ok(solvable)
}

/// A first-order equivariant lift of the action to xy = lambda eps.
#[derive(Debug, Clone)]
pub struct FirstOrderNodeLift {
    pub lambda: FpScalar,
    /// f_{sigma,0} in x k[[x]]: the x-branch correction of the generator.
    pub f0: TruncatedSeries,
    /// f_{sigma,1} in y k[[y]].
    pub f1: TruncatedSeries,
}

fn degree2_coefficient(s: &TruncatedSeries) -> u64 {
    if s.precision() > 2 {
        s.coeff(2)
    } else {
        0
    }
}

/// Solve the generator's two trace equations
/// Tr_G((f0 - v_{sigma,1}) d/dx) = 0 = Tr_G((f1 - v_{sigma,0}) d/dy)
/// for f0, f1, with lambda normalized to 1. Fails with a hypothesis
/// error when no solution exists at precision.
///
/// The sign of the constant comes from composing two lifted
/// automorphisms directly: the cross term -(sigma(y)-y)/(y sigma(y))
/// forced by ideal preservation leaks -v_{sigma,1} (tau'(sigma(x)) - 1)
/// into the x-branch, and the cross terms themselves telescope exactly.
pub fn lift_first_order(a: &CyclicNodeAction) -> Result<FirstOrderNodeLift> {
    let p = a.p();
    let v0 = degree2_coefficient(a.branch_x().generator().series());
    let v1 = degree2_coefficient(a.branch_y().generator().series());
    let solve_branch = |action: &CyclicSmoothAction, constant: u64| -> Result<TruncatedSeries> {
        let d = action.ramification_profile()?.different;
        let window = ((2 * d + 4 * p + 4) as usize).min(action.precision() - 1);
        match linear_trace_zero_solve(action, constant, window, window)? {
            Some(sol) => {
                // Strip the fixed constant; the rest is the branch series.
                let mut c: Vec<u64> = sol.coeffs().to_vec();
                c[0] = 0;
                TruncatedSeries::from_residues(p, c)
            }
            None => Err(Error::hypothesis(
                "not liftable: the branch trace equation has no solution at precision".to_string(),
            )),
        }
    };
    let f0 = solve_branch(a.branch_x(), (p - v1 % p) % p)?;
    let f1 = solve_branch(a.branch_y(), (p - v0 % p) % p)?;
    Ok(FirstOrderNodeLift { lambda: FpScalar::new(p, 1)?, f0, f1 })
}

/// The image of (x, y) under a lifted automorphism of
/// k[eps][[x,y]]/(xy - lambda eps, eps^2), in branch normal form:
/// x |-> a(x) + eps (b(x) + c(y)), y |-> d(y) + eps (e(y) + f(x)).
#[derive(Debug, Clone)]
struct EpsState {
    a: TruncatedSeries,
    b: TruncatedSeries,
    c: TruncatedSeries,
    d: TruncatedSeries,
    e: TruncatedSeries,
    f: TruncatedSeries,
}

fn series_constant(s: &TruncatedSeries) -> u64 {
    if s.precision() > 0 {
        s.coeff(0)
    } else {
        0
    }
}

/// Compose a state with the generator lift: substitute the generator's
/// images into the state's series and reduce mixed monomials x^i y^j
/// (which vanish to first order unless one exponent is zero).
fn compose_state(s: &EpsState, g: &EpsState) -> Result<EpsState> {
    let sx = &g.a;
    let sy = &g.d;
    let w = s.a.derivative().compose(&sx.truncate(sx.precision().min(s.a.precision() - 1))?)?;
    let w0 = series_constant(&w);
    let c0 = series_constant(&g.c);
    let mut b = g.b.truncate(g.b.precision().min(w.precision()))?.mul(&w)?;
    if c0 != 0 {
        b = b.add(&w.truncate(b.precision())?.scale(c0 as i64))?;
        b = b.sub(&TruncatedSeries::monomial(b.p(), 0, (c0 * w0 % b.p()) as i64, b.precision())?)?;
    }
    let bsx = s.b.compose(&sx.truncate(s.b.precision().min(sx.precision()))?)?;
    b = b.truncate(b.precision().min(bsx.precision()))?.add(&bsx)?;
    let csy = s.c.compose(&sy.truncate(s.c.precision().min(sy.precision()))?)?;
    let mut c = g.c.scale(w0 as i64);
    c = c.truncate(c.precision().min(csy.precision()))?.add(&csy)?;

    let gq = s.d.derivative().compose(&sy.truncate(sy.precision().min(s.d.precision() - 1))?)?;
    let g0 = series_constant(&gq);
    let f0c = series_constant(&g.f);
    let mut e = g.e.truncate(g.e.precision().min(gq.precision()))?.mul(&gq)?;
    if f0c != 0 {
        e = e.add(&gq.truncate(e.precision())?.scale(f0c as i64))?;
        e = e.sub(&TruncatedSeries::monomial(e.p(), 0, (f0c * g0 % e.p()) as i64, e.precision())?)?;
    }
    let esy = s.e.compose(&sy.truncate(s.e.precision().min(sy.precision()))?)?;
    e = e.truncate(e.precision().min(esy.precision()))?.add(&esy)?;
    let fsx = s.f.compose(&sx.truncate(s.f.precision().min(sx.precision()))?)?;
    let mut f = g.f.scale(g0 as i64);
    f = f.truncate(f.precision().min(fsx.precision()))?.add(&fsx)?;

    let a = s.a.compose(&sx.truncate(s.a.precision().min(sx.precision()))?)?;
    let d = s.d.compose(&sy.truncate(s.d.precision().min(sy.precision()))?)?;
    Ok(EpsState { a, b, c, d, e, f })
}

fn identity_state(p: u64, precision: usize) -> Result<EpsState> {
    Ok(EpsState {
        a: TruncatedSeries::x(p, precision)?,
        b: TruncatedSeries::zero(p, precision)?,
        c: TruncatedSeries::zero(p, precision)?,
        d: TruncatedSeries::x(p, precision)?,
        e: TruncatedSeries::zero(p, precision)?,
        f: TruncatedSeries::zero(p, precision)?,
    })
}

/// Build the generator lift state from (lambda, f0, f1):
/// sigma_eps(x) = sigma(x) - eps lambda (sigma(y)-y)/(y sigma(y)) + eps f0 sigma'(x),
/// and symmetrically for y.
fn generator_state(a: &CyclicNodeAction, lift: &FirstOrderNodeLift) -> Result<EpsState> {
    let p = a.p();
    let lambda = lift.lambda.value();
    let sx = a.branch_x().generator().series().clone();
    let sy = a.branch_y().generator().series().clone();
    let cross = |s: &TruncatedSeries| -> Result<TruncatedSeries> {
        // lambda (sigma(t) - t) / (t sigma(t)), a series in t.
        let num = s.sub(&TruncatedSeries::x(p, s.precision())?)?;
        if num.is_zero() || lambda == 0 {
            return TruncatedSeries::zero(p, s.precision().saturating_sub(2));
        }
        let den = TruncatedSeries::x(p, s.precision())?.mul(s)?.shift_down(2)?;
        Ok(num.shift_down(2)?.mul(&den.inverse()?)?.scale(lambda as i64))
    };
    let h0 = lift.f0.truncate(lift.f0.precision().min(sx.precision() - 1))?.mul(&sx.derivative())?;
    let h1 = lift.f1.truncate(lift.f1.precision().min(sy.precision() - 1))?.mul(&sy.derivative())?;
    Ok(EpsState {
        b: h0.truncate(h0.precision().min(sx.precision()))?,
        c: cross(&sy)?.negate(),
        e: h1.truncate(h1.precision().min(sy.precision()))?,
        f: cross(&sx)?.negate(),
        a: sx,
        d: sy,
    })
}

/// The eps coefficient of sigma_eps(x) sigma_eps(y) in branch normal
/// form (x-part, y-part, constant); the eps-free part is x y U V, which
/// reduces to lambda eps times the displayed parts.
fn product_eps_parts(
    s: &EpsState,
    lambda: u64,
) -> Result<(TruncatedSeries, TruncatedSeries, u64)> {
    let p = s.a.p();
    let u = s.a.shift_down(1)?;
    let v = s.d.shift_down(1)?;
    let u0 = series_constant(&u);
    let v0 = series_constant(&v);
    // lambda (U(x) V(0) + U(0) V(y) - U(0) V(0))
    let mut x_part = u.scale((v0 as i64) * lambda as i64);
    let mut y_part = v.scale((u0 as i64) * lambda as i64);
    let mut constant = subm(p, 0, norm_i64(p, (lambda * u0 % p * v0 % p) as i64));
    // eps A E: A(0)=0 so only E(0) A(x) survives.
    let e0 = series_constant(&s.e);
    if e0 != 0 {
        x_part = x_part.truncate(x_part.precision().min(s.a.precision()))?.add(&s.a.scale(e0 as i64))?;
    }
    // eps A F: pure x.
    let af = s.a.truncate(s.a.precision().min(s.f.precision()))?.mul(&s.f)?;
    x_part = x_part.truncate(x_part.precision().min(af.precision()))?.add(&af)?;
    // eps D B: only B(0) D(y).
    let b0 = series_constant(&s.b);
    if b0 != 0 {
        y_part = y_part.truncate(y_part.precision().min(s.d.precision()))?.add(&s.d.scale(b0 as i64))?;
    }
    // eps D C: pure y.
    let dc = s.d.truncate(s.d.precision().min(s.c.precision()))?.mul(&s.c)?;
    y_part = y_part.truncate(y_part.precision().min(dc.precision()))?.add(&dc)?;
    // Move the branch constants into the scalar slot.
    let cx = series_constant(&x_part);
    let cy = series_constant(&y_part);
    constant = (constant + cx + cy) % p;
    let strip = |s: &TruncatedSeries| -> TruncatedSeries {
        let mut c: Vec<u64> = s.coeffs().to_vec();
        if !c.is_empty() {
            c[0] = 0;
        }
        TruncatedSeries::from_residues(s.p(), c).expect("stripping a constant keeps the modulus")
    };
    Ok((strip(&x_part), strip(&y_part), constant))
}

fn eps_part_vanishes(b: &TruncatedSeries, c: &TruncatedSeries, upto: usize) -> bool {
    // b(x) + c(y) = 0 on the node iff the nonconstant parts vanish and
    // the constants cancel.
    let n = upto.min(b.precision()).min(c.precision());
    if n == 0 {
        return true;
    }
    if (series_constant(b) + series_constant(c)) % b.p() != 0 {
        return false;
    }
    (1..n).all(|i| b.coeff(i) == 0 && c.coeff(i) == 0)
}

/// Check a candidate lift end to end: the ideal (xy - lambda eps) is
/// preserved by the lifted generator, and its p^n-th power is the
/// identity to first order in eps.
pub fn verify_lift(a: &CyclicNodeAction, lift: &FirstOrderNodeLift) -> Result<bool> {
    let p = a.p();
    let lambda = lift.lambda.value();
    let gen = generator_state(a, lift)?;
    // (i) ideal preservation.
    let (xp, yp, c) = product_eps_parts(&gen, lambda)?;
    let slack = 2 + a.group_order() as usize;
    let check_up = |s: &TruncatedSeries| s.precision().saturating_sub(slack);
    if !xp.truncate(check_up(&xp))?.is_zero()
        || !yp.truncate(check_up(&yp))?.is_zero()
        || c != lambda % p
    {
        return Ok(false);
    }
    // (ii) the p^n-th power of the lift is the identity to first order.
    let mut state = identity_state(p, a.precision())?;
    for _ in 0..a.group_order() {
        state = compose_state(&state, &gen)?;
    }
    let upto_a = check_up(&state.a).min(check_up(&state.d));
    let x = TruncatedSeries::x(p, upto_a)?;
    if !state.a.truncate(upto_a)?.agrees(&x, upto_a)?
        || !state.d.truncate(upto_a)?.agrees(&x, upto_a)?
    {
        return Ok(false);
    }
    let upto_eps = check_up(&state.b)
        .min(check_up(&state.c))
        .min(check_up(&state.e))
        .min(check_up(&state.f));
    Ok(eps_part_vanishes(&state.b, &state.c, upto_eps)
        && eps_part_vanishes(&state.e, &state.f, upto_eps))
}

/// The trichotomy from numeric data alone. A coordinate condition
/// "relevable" is (2 different + 1) nonzero mod the branch image order,
/// or the branch image proper in G; "unconditional" drops the second
/// clause.
pub fn classify_relevability_data(d: &NodeLocalData) -> Result<RelevabilityClass> {
    let relevable = |diff: u64, image: u64| -> bool {
        image == 1 || (2 * diff + 1) % image != 0 || image != d.group_order
    };
    let unconditional = |diff: u64, image: u64| -> bool { image > 1 && (2 * diff + 1) % image != 0 };
    let x_is_1 = d.conductors.0 == Some(1);
    let y_is_1 = d.conductors.1 == Some(1);
    let (ok, strong) = match (x_is_1, y_is_1) {
        // Neither branch has conductor 1: always liftable.
        (false, false) => (true, true),
        // Conductor (m, 1), m != 1: the obstruction sits on the x-branch.
        (false, true) => (
            relevable(d.differents.0, d.image_orders.0),
            unconditional(d.differents.0, d.image_orders.0),
        ),
        (true, false) => (
            relevable(d.differents.1, d.image_orders.1),
            unconditional(d.differents.1, d.image_orders.1),
        ),
        (true, true) => (
            relevable(d.differents.0, d.image_orders.0)
                && relevable(d.differents.1, d.image_orders.1),
            unconditional(d.differents.0, d.image_orders.0)
                && unconditional(d.differents.1, d.image_orders.1),
        ),
    };
    Ok(if !ok {
        RelevabilityClass::NonRelevable
    } else if strong {
        RelevabilityClass::Unconditional
    } else {
        RelevabilityClass::Conditional
    })
}

pub fn classify_relevability(a: &CyclicNodeAction) -> Result<RelevabilityClass> {
    classify_relevability_data(&NodeLocalData::from_profile(&a.profile()?))
}

/// Build the full family f_{sigma^i, 0/1} from a generator lift by the
/// one-step recurrence, for use with the recurrence checker.
pub fn lift_family(
    a: &CyclicNodeAction,
    lift: &FirstOrderNodeLift,
) -> Result<(Vec<TruncatedSeries>, Vec<TruncatedSeries>)> {
    let order = a.group_order() as usize;
    let build = |action: &CyclicSmoothAction,
                 f_gen: &TruncatedSeries,
                 v_other: u64|
     -> Result<Vec<TruncatedSeries>> {
        let p = action.p();
        let prec = f_gen.precision().min(action.precision() - 1);
        let mut fam = vec![TruncatedSeries::zero(p, prec)?];
        for i in 1..order {
            let prev = &fam[i - 1];
            let next = recurrence_step(action, f_gen, prev, i - 1, v_other)?;
            fam.push(next);
        }
        // Closing the cycle: the recurrence applied once more must give 0.
        let closure = recurrence_step(action, f_gen, &fam[order - 1], order - 1, v_other)?;
        let upto = closure.precision().saturating_sub(2 + order);
        if !closure.truncate(upto)?.is_zero() {
            return Err(Error::internal(
                "lift family does not close: the group relation fails".to_string(),
            ));
        }
        Ok(fam)
    };
    let v0 = degree2_coefficient(a.branch_x().generator().series());
    let v1 = degree2_coefficient(a.branch_y().generator().series());
    Ok((
        build(a.branch_x(), &lift.f0, v1)?,
        build(a.branch_y(), &lift.f1, v0)?,
    ))
}

/// One step of the lifting recurrence with sigma the generator and
/// tau = sigma^i:
/// f_{sigma^{i+1}} = -(1 - 1/tau'(sigma(x))) v / sigma'(x)
///                   + f_sigma + f_{sigma^i}(sigma(x)) / sigma'(x).
fn recurrence_step(
    action: &CyclicSmoothAction,
    f_gen: &TruncatedSeries,
    f_prev: &TruncatedSeries,
    i: usize,
    v: u64,
) -> Result<TruncatedSeries> {
    let p = action.p();
    let image = action.faithful_order() as usize;
    let s = action.generator().series();
    let ds = s.derivative();
    let inv_ds = ds.inverse()?;
    let tau = action.power_series(i % image);
    let dtau = tau.derivative();
    let dtau_at_s = dtau.compose(&s.truncate(dtau.precision().min(s.precision()))?)?;
    let one = TruncatedSeries::one(p, dtau_at_s.precision())?;
    let lead = one
        .sub(&dtau_at_s.inverse()?)?
        .scale(-(v as i64));
    let lead = lead.truncate(lead.precision().min(inv_ds.precision()))?.mul(&inv_ds)?;
    let fprev_at_s = f_prev.compose(&s.truncate(f_prev.precision().min(s.precision()))?)?;
    let tail = fprev_at_s
        .truncate(fprev_at_s.precision().min(inv_ds.precision()))?
        .mul(&inv_ds)?;
    let n = lead.precision().min(f_gen.precision()).min(tail.precision());
    lead.truncate(n)?.add(&f_gen.truncate(n)?)?.add(&tail.truncate(n)?)
}

/// Verify the full cocycle recurrences on candidate families indexed by
/// the powers of the generator: for all i, j,
/// f_{i+j,0}(x) = -(1 - 1/(tau' (sigma(x)))) v_{sigma,1}/sigma'(x)
///                + f_{i,0}(x) + f_{j,0}(sigma(x))/sigma'(x)
/// with sigma = gen^i, tau = gen^j, and symmetrically on the y-branch.
pub fn check_lift_recurrences(
    a: &CyclicNodeAction,
    fam0: &[TruncatedSeries],
    fam1: &[TruncatedSeries],
) -> Result<bool> {
    let order = a.group_order() as usize;
    if fam0.len() != order || fam1.len() != order {
        return Err(Error::data(format!(
            "need one family member per group element ({order})"
        )));
    }
    let check = |action: &CyclicSmoothAction,
                 fam: &[TruncatedSeries],
                 other: &CyclicSmoothAction|
     -> Result<bool> {
        let p = action.p();
        let image = action.faithful_order() as usize;
        let other_image = other.faithful_order() as usize;
        for i in 0..order {
            let s = action.power_series(i % image);
            let ds = s.derivative();
            let inv_ds = ds.inverse()?;
            let v = degree2_coefficient(other.power_series(i % other_image));
            for j in 0..order {
                let tau = action.power_series(j % image);
                let dtau = tau.derivative();
                let dtau_at_s =
                    dtau.compose(&s.truncate(dtau.precision().min(s.precision()))?)?;
                let one = TruncatedSeries::one(p, dtau_at_s.precision())?;
                let lead = one.sub(&dtau_at_s.inverse()?)?.scale(-(v as i64));
                let lead =
                    lead.truncate(lead.precision().min(inv_ds.precision()))?.mul(&inv_ds)?;
                let fj_at_s =
                    fam[j].compose(&s.truncate(fam[j].precision().min(s.precision()))?)?;
                let tail =
                    fj_at_s.truncate(fj_at_s.precision().min(inv_ds.precision()))?.mul(&inv_ds)?;
                let n = lead
                    .precision()
                    .min(fam[i].precision())
                    .min(tail.precision())
                    .min(fam[(i + j) % order].precision())
                    .saturating_sub(2 + order);
                let rhs = lead.truncate(n)?.add(&fam[i].truncate(n)?)?.add(&tail.truncate(n)?)?;
                if !rhs.agrees(&fam[(i + j) % order].truncate(n)?, n)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    Ok(check(a.branch_x(), fam0, a.branch_y())? && check(a.branch_y(), fam1, a.branch_x())?)
}
