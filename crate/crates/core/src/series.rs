//! Truncated formal power series over the prime field F_p.
//!
//! Every value carries an explicit precision: a series is known modulo
//! x^N and nothing beyond degree N-1 is ever inferred. Operations
//! propagate precision pessimistically and refuse to fabricate
//! coefficients. "Zero at this precision" is a distinct observable
//! outcome of [`TruncatedSeries::valuation`], never silently conflated
//! with exact zero.
//!
//! Coefficients live in the prime field itself, not an extension; when a
//! construction would need a constant root that F_p does not contain,
//! the operation fails loudly.
//!
//! Arithmetic is schoolbook throughout; precisions stay at desk scale so
//! asymptotically fast multiplication buys nothing.

use crate::error::{Error, Result};

pub(crate) fn addm(p: u64, a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub(crate) fn subm(p: u64, a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn mulm(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powm(p: u64, mut a: u64, mut e: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(p, r, a);
        }
        a = mulm(p, a, a);
        e >>= 1;
    }
    r
}

pub(crate) fn invm(p: u64, a: u64) -> Result<u64> {
    if a % p == 0 {
        return Err(Error::data(format!("division by zero in F_{p}")));
    }
    Ok(powm(p, a, p - 2))
}

/// Reduce a signed integer into [0, p).
pub(crate) fn norm_i64(p: u64, v: i64) -> u64 {
    let m = p as i64;
    (((v % m) + m) % m) as u64
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if !(2..=1u64 << 31).contains(&p) || !is_prime(p) {
        return Err(Error::data(format!("{p} is not a prime in [2, 2^31]")));
    }
    Ok(())
}

/// A residue in the prime field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FpScalar {
    p: u64,
    value: u64,
}

impl FpScalar {
    pub fn new(p: u64, value: i64) -> Result<Self> {
        check_prime(p)?;
        Ok(FpScalar { p, value: norm_i64(p, value) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_p(&self, other: &FpScalar) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn add(&self, other: &FpScalar) -> Result<FpScalar> {
        self.same_p(other)?;
        Ok(FpScalar { p: self.p, value: addm(self.p, self.value, other.value) })
    }

    pub fn sub(&self, other: &FpScalar) -> Result<FpScalar> {
        self.same_p(other)?;
        Ok(FpScalar { p: self.p, value: subm(self.p, self.value, other.value) })
    }

    pub fn mul(&self, other: &FpScalar) -> Result<FpScalar> {
        self.same_p(other)?;
        Ok(FpScalar { p: self.p, value: mulm(self.p, self.value, other.value) })
    }

    pub fn inv(&self) -> Result<FpScalar> {
        Ok(FpScalar { p: self.p, value: invm(self.p, self.value)? })
    }

    pub fn div(&self, other: &FpScalar) -> Result<FpScalar> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: u64) -> FpScalar {
        FpScalar { p: self.p, value: powm(self.p, self.value, e) }
    }
}

/// Outcome of a valuation query on a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    /// Least degree with a nonzero coefficient.
    Finite(usize),
    /// Every known coefficient vanishes; the series is indistinguishable
    /// from 0 modulo x^N for the recorded N.
    ZeroAtPrecision(usize),
}

impl Valuation {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::ZeroAtPrecision(_) => None,
        }
    }
}

/// A formal power series over F_p known modulo x^N.
///
/// `coeffs[i]` is the coefficient of x^i for i < N; N is the precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    p: u64,
    coeffs: Vec<u64>,
}

impl TruncatedSeries {
    pub fn new(p: u64, coeffs: Vec<i64>) -> Result<Self> {
        check_prime(p)?;
        Ok(TruncatedSeries {
            p,
            coeffs: coeffs.into_iter().map(|c| norm_i64(p, c)).collect(),
        })
    }

    pub fn from_residues(p: u64, coeffs: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        Ok(TruncatedSeries { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() })
    }

    pub fn zero(p: u64, precision: usize) -> Result<Self> {
        check_prime(p)?;
        Ok(TruncatedSeries { p, coeffs: vec![0; precision] })
    }

    pub fn one(p: u64, precision: usize) -> Result<Self> {
        let mut s = TruncatedSeries::zero(p, precision)?;
        if precision > 0 {
            s.coeffs[0] = 1 % p;
        }
        Ok(s)
    }

    /// The monomial c * x^k.
    pub fn monomial(p: u64, k: usize, c: i64, precision: usize) -> Result<Self> {
        let mut s = TruncatedSeries::zero(p, precision)?;
        if k < precision {
            s.coeffs[k] = norm_i64(p, c);
        }
        Ok(s)
    }

    /// The identity series x.
    pub fn x(p: u64, precision: usize) -> Result<Self> {
        TruncatedSeries::monomial(p, 1, 1, precision)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of x^i; panics if i is at or beyond the precision,
    /// because that coefficient is simply not known.
    pub fn coeff(&self, i: usize) -> u64 {
        assert!(
            i < self.coeffs.len(),
            "coefficient {} requested at precision {}",
            i,
            self.coeffs.len()
        );
        self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same_p(&self, other: &TruncatedSeries) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        Ok(())
    }

    /// Drop coefficients so that only degrees < n remain. Requesting more
    /// precision than is known is an error, never an extrapolation.
    pub fn truncate(&self, n: usize) -> Result<TruncatedSeries> {
        if n > self.coeffs.len() {
            return Err(Error::precision(
                self.coeffs.len(),
                format!("cannot extend precision to {n}"),
            ));
        }
        Ok(TruncatedSeries { p: self.p, coeffs: self.coeffs[..n].to_vec() })
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.same_p(other)?;
        let n = self.precision().min(other.precision());
        let coeffs = (0..n)
            .map(|i| addm(self.p, self.coeffs[i], other.coeffs[i]))
            .collect();
        Ok(TruncatedSeries { p: self.p, coeffs })
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.same_p(other)?;
        let n = self.precision().min(other.precision());
        let coeffs = (0..n)
            .map(|i| subm(self.p, self.coeffs[i], other.coeffs[i]))
            .collect();
        Ok(TruncatedSeries { p: self.p, coeffs })
    }

    pub fn scale(&self, c: i64) -> TruncatedSeries {
        let c = norm_i64(self.p, c);
        TruncatedSeries {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&a| mulm(self.p, a, c)).collect(),
        }
    }

    pub fn negate(&self) -> TruncatedSeries {
        self.scale(-1)
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.same_p(other)?;
        let n = self.precision().min(other.precision());
        let p = self.p;
        let mut acc = vec![0u128; n];
        let cap = (p as u128).wrapping_mul(p as u128);
        let limit = u128::MAX - cap;
        for i in 0..n.min(self.coeffs.len()) {
            let a = self.coeffs[i];
            if a == 0 {
                continue;
            }
            for j in 0..n - i {
                if j < other.coeffs.len() {
                    let t = a as u128 * other.coeffs[j] as u128;
                    acc[i + j] += t;
                    if acc[i + j] > limit {
                        acc[i + j] %= p as u128;
                    }
                }
            }
        }
        let coeffs = acc.into_iter().map(|v| (v % p as u128) as u64).collect();
        Ok(TruncatedSeries { p, coeffs })
    }

    /// Multiply by x^k; the result is known modulo x^{N+k}.
    pub fn shift_up(&self, k: usize) -> TruncatedSeries {
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        TruncatedSeries { p: self.p, coeffs }
    }

    /// Divide by x^k; the first k coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<TruncatedSeries> {
        if k > self.coeffs.len() {
            return Err(Error::precision(self.coeffs.len(), format!("cannot shift down by {k}")));
        }
        if self.coeffs[..k].iter().any(|&c| c != 0) {
            return Err(Error::internal(format!("shift_down({k}) on series of lower valuation")));
        }
        Ok(TruncatedSeries { p: self.p, coeffs: self.coeffs[k..].to_vec() })
    }

    /// Multiplicative inverse; requires a unit constant term.
    pub fn inverse(&self) -> Result<TruncatedSeries> {
        let n = self.precision();
        if n == 0 || self.coeffs[0] == 0 {
            return Err(Error::data("inverse of a series with zero constant term".to_string()));
        }
        let p = self.p;
        let c0 = invm(p, self.coeffs[0])?;
        let mut out = vec![0u64; n];
        out[0] = c0;
        for k in 1..n {
            let mut s = 0u64;
            for i in 1..=k {
                let a = if i < self.coeffs.len() { self.coeffs[i] } else { 0 };
                s = addm(p, s, mulm(p, a, out[k - i]));
            }
            out[k] = mulm(p, subm(p, 0, s), c0);
        }
        Ok(TruncatedSeries { p, coeffs: out })
    }

    /// f(g(x)) for g with zero constant term; precision is the minimum of
    /// the two inputs.
    pub fn compose(&self, g: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.same_p(g)?;
        let n = self.precision().min(g.precision());
        if n == 0 {
            return Ok(TruncatedSeries { p: self.p, coeffs: vec![] });
        }
        if g.coeffs[0] != 0 {
            return Err(Error::data("composition with a series of nonzero constant term".to_string()));
        }
        let g = g.truncate(n)?;
        // Horner from the top; the partial result before multiplying by
        // g^i only needs precision n - i.
        let mut acc = TruncatedSeries::zero(self.p, n)?;
        for i in (0..n).rev() {
            acc = acc.mul(&g)?;
            if acc.precision() < n {
                let mut c = acc.coeffs;
                c.resize(n, 0);
                // Degrees >= n - i of acc are later shifted past x^n by the
                // remaining i powers of g (valuation >= 1), so padding with
                // zeros here never invents a coefficient that survives.
                acc = TruncatedSeries { p: self.p, coeffs: c };
            }
            if self.coeffs[i] != 0 {
                acc.coeffs[0] = addm(self.p, acc.coeffs[0], self.coeffs[i]);
            }
        }
        Ok(acc)
    }

    /// Formal derivative; one order of precision is lost.
    pub fn derivative(&self) -> TruncatedSeries {
        let n = self.precision().saturating_sub(1);
        let coeffs = (0..n)
            .map(|i| mulm(self.p, self.coeffs[i + 1], ((i + 1) as u64) % self.p))
            .collect();
        TruncatedSeries { p: self.p, coeffs }
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|&c| c != 0) {
            Some(v) => Valuation::Finite(v),
            None => Valuation::ZeroAtPrecision(self.precision()),
        }
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, e: u64) -> Result<TruncatedSeries> {
        let mut r = TruncatedSeries::one(self.p, self.precision())?;
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(r)
    }

    /// The unique m-th root with constant term 1, for gcd(m, p) = 1 and
    /// u(0) = 1, by Newton iteration on v^m - u.
    pub fn nth_root(&self, m: u64) -> Result<TruncatedSeries> {
        let p = self.p;
        if m == 0 || m % p == 0 {
            return Err(Error::hypothesis(format!("root degree {m} not coprime to {p}")));
        }
        let n = self.precision();
        if n == 0 || self.coeffs[0] != 1 {
            return Err(Error::hypothesis("m-th root requires constant term 1".to_string()));
        }
        let minv = invm(p, m % p)?;
        let mut v = TruncatedSeries::one(p, 1)?;
        let mut k = 1usize;
        while k < n {
            k = (2 * k).min(n);
            let mut c = v.coeffs.clone();
            c.resize(k, 0);
            v = TruncatedSeries { p, coeffs: c };
            let u = self.truncate(k)?;
            // v <- v - (v^m - u) / (m v^{m-1})
            let vm1 = v.pow(m - 1)?;
            let err = vm1.mul(&v)?.sub(&u)?;
            let corr = err.mul(&vm1.inverse()?)?.scale(minv as i64);
            v = v.sub(&corr)?;
        }
        Ok(v)
    }

    /// u^{a/m}: an m-th root of the unit constant is looked up in F_p
    /// (failing loudly if absent), the remaining unit part goes through
    /// [`Self::nth_root`], and the result w satisfies w^m = u^a.
    pub fn rational_power(&self, a: i64, m: u64) -> Result<TruncatedSeries> {
        let p = self.p;
        if m == 0 || m % p == 0 {
            return Err(Error::hypothesis(format!("root degree {m} not coprime to {p}")));
        }
        let n = self.precision();
        if n == 0 || self.coeffs[0] == 0 {
            return Err(Error::hypothesis("rational power requires a unit constant term".to_string()));
        }
        let c = self.coeffs[0];
        let r = root_in_fp(p, c, m)?;
        let unit = self.scale(invm(p, c)? as i64);
        let v = unit.nth_root(m)?;
        let w = v.scale(r as i64);
        if a >= 0 {
            w.pow(a as u64)
        } else {
            w.inverse()?.pow((-a) as u64)
        }
    }

    /// Compositional inverse: r with s(r(x)) = x = r(s(x)), for s with
    /// s(0) = 0 and unit linear term. Newton iteration on s(r) - x.
    pub fn reversion(&self) -> Result<TruncatedSeries> {
        let p = self.p;
        let n = self.precision();
        if n < 2 || self.coeffs[0] != 0 || self.coeffs[1] == 0 {
            return Err(Error::hypothesis(
                "reversion requires s(0) = 0 and a unit linear coefficient".to_string(),
            ));
        }
        let ds = self.derivative();
        let mut r = TruncatedSeries::monomial(p, 1, invm(p, self.coeffs[1])? as i64, 2)?;
        let mut k = 2usize;
        loop {
            let x = TruncatedSeries::x(p, k)?;
            let err = self.truncate(k)?.compose(&r)?.sub(&x)?;
            if let Valuation::Finite(v) = err.valuation() {
                // The slope s'(r) is one order short of k; dividing the
                // error by it after stripping x^v keeps full precision,
                // since the error's valuation v >= 1 covers the loss.
                let slope = ds
                    .truncate((k - v).min(ds.precision()))?
                    .compose(&r.truncate((k - v).min(r.precision()))?)?;
                let corr = err.shift_down(v)?.mul(&slope.inverse()?)?.shift_up(v);
                r = r.sub(&corr.truncate(k)?)?;
            }
            if k >= n {
                break;
            }
            k = (2 * k).min(n);
            let mut c = r.coeffs.clone();
            c.resize(k, 0);
            r = TruncatedSeries { p, coeffs: c };
        }
        r.truncate(n)
    }

    /// Equality of all coefficients below `upto`, which must be within
    /// both precisions.
    pub fn agrees(&self, other: &TruncatedSeries, upto: usize) -> Result<bool> {
        self.same_p(other)?;
        if upto > self.precision() || upto > other.precision() {
            return Err(Error::precision(
                self.precision().min(other.precision()),
                format!("cannot compare up to degree {upto}"),
            ));
        }
        Ok(self.coeffs[..upto] == other.coeffs[..upto])
    }
}

/// An m-th root of c in F_p, or a loud failure when none exists.
pub fn root_in_fp(p: u64, c: u64, m: u64) -> Result<u64> {
    let c = c % p;
    if c == 0 {
        return if m > 0 { Ok(0) } else { Err(Error::data("0^0 root".to_string())) };
    }
    if p == 2 {
        return Ok(1);
    }
    let g = gcd(m, p - 1);
    if powm(p, c, (p - 1) / g) != 1 {
        return Err(Error::MissingRoot { value: c, degree: m, p });
    }
    if g == 1 {
        // m is invertible modulo p - 1, so c^(m^{-1}) is the unique root.
        let minv = inv_mod(m % (p - 1), p - 1)
            .ok_or_else(|| Error::internal("gcd said m invertible mod p-1".to_string()))?;
        return Ok(powm(p, c, minv));
    }
    if p <= 1 << 22 {
        for r in 1..p {
            if powm(p, r, m % (p - 1)) == c {
                return Ok(r);
            }
        }
        return Err(Error::MissingRoot { value: c, degree: m, p });
    }
    Err(Error::internal(format!(
        "root search in F_{p} with gcd({m}, p-1) > 1 is beyond the supported scale"
    )))
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let (mut t, mut newt) = (0i128, 1i128);
    let (mut r, mut newr) = (n as i128, a as i128);
    while newr != 0 {
        let q = r / newr;
        (t, newt) = (newt, t - q * newt);
        (r, newr) = (newr, r - q * newr);
    }
    if r != 1 {
        return None;
    }
    Some((((t % n as i128) + n as i128) % n as i128) as u64)
}

/// A Laurent series x^offset * body over F_p; `body` is a truncated
/// power series, so the value is known on exponents
/// offset .. offset + body.precision().
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    offset: i64,
    body: TruncatedSeries,
}

impl LaurentSeries {
    pub fn new(offset: i64, body: TruncatedSeries) -> Self {
        LaurentSeries { offset, body }
    }

    pub fn from_series(s: TruncatedSeries) -> Self {
        LaurentSeries { offset: 0, body: s }
    }

    pub fn p(&self) -> u64 {
        self.body.p()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn body(&self) -> &TruncatedSeries {
        &self.body
    }

    /// Exponent bound below which every coefficient is known.
    pub fn known_below(&self) -> i64 {
        self.offset + self.body.precision() as i64
    }

    pub fn coeff_at(&self, e: i64) -> u64 {
        if e < self.offset {
            0
        } else {
            let i = (e - self.offset) as usize;
            if i < self.body.precision() {
                self.body.coeff(i)
            } else {
                panic!("coefficient at exponent {e} beyond Laurent precision");
            }
        }
    }

    /// Shift the offset up so that the body has a nonzero constant term.
    pub fn normalized(&self) -> Result<LaurentSeries> {
        match self.body.valuation() {
            Valuation::Finite(v) => Ok(LaurentSeries {
                offset: self.offset + v as i64,
                body: self.body.shift_down(v)?,
            }),
            Valuation::ZeroAtPrecision(n) => Err(Error::precision(
                n,
                "cannot normalize a Laurent series that vanishes at precision".to_string(),
            )),
        }
    }

    pub fn valuation(&self) -> Result<i64> {
        Ok(self.normalized()?.offset)
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn mul(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        Ok(LaurentSeries {
            offset: self.offset + other.offset,
            body: self.body.mul(&other.body)?,
        })
    }

    pub fn add(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        let off = self.offset.min(other.offset);
        let hi = self.known_below().min(other.known_below());
        if hi <= off {
            return Err(Error::precision(0, "Laurent addition with no overlapping window".to_string()));
        }
        let n = (hi - off) as usize;
        let p = self.body.p();
        let mut coeffs = vec![0u64; n];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let e = off + k as i64;
            let a = if e >= self.offset && e < self.known_below() { self.coeff_at(e) } else { 0 };
            let b = if e >= other.offset && e < other.known_below() { other.coeff_at(e) } else { 0 };
            *c = addm(p, a, b);
        }
        Ok(LaurentSeries { offset: off, body: TruncatedSeries::from_residues(p, coeffs)? })
    }

    pub fn sub(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> LaurentSeries {
        LaurentSeries { offset: self.offset, body: self.body.scale(c) }
    }

    pub fn inverse(&self) -> Result<LaurentSeries> {
        let n = self.normalized()?;
        Ok(LaurentSeries { offset: -n.offset, body: n.body.inverse()? })
    }

    pub fn powi(&self, e: i64) -> Result<LaurentSeries> {
        if e >= 0 {
            let b = self.body.pow(e as u64)?;
            Ok(LaurentSeries { offset: self.offset * e, body: b })
        } else {
            self.inverse()?.powi(-e)
        }
    }

    /// Substitute a power series of positive valuation for the variable.
    /// The argument must be a unit times a power of x so that negative
    /// exponents of the Laurent series make sense after substitution.
    pub fn eval_at_series(&self, g: &TruncatedSeries) -> Result<LaurentSeries> {
        let gl = LaurentSeries::from_series(g.clone()).normalized()?;
        if gl.offset < 1 {
            return Err(Error::data("Laurent substitution needs positive valuation".to_string()));
        }
        let shifted = gl.powi(self.offset)?;
        let composed = self.body.compose(g)?;
        shifted.mul(&LaurentSeries::from_series(composed))
    }

    /// Interpret as an ordinary power series; fails if any known
    /// coefficient sits at a negative exponent.
    pub fn into_series(self) -> Result<TruncatedSeries> {
        if self.offset >= 0 {
            Ok(self.body.shift_up(self.offset as usize))
        } else {
            let n = self.normalized()?;
            if n.offset < 0 {
                return Err(Error::internal(format!(
                    "Laurent series with a pole of order {} is not a power series",
                    -n.offset
                )));
            }
            Ok(n.body.shift_up(n.offset as usize))
        }
    }
}

impl std::fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}*x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.precision())
    }
}
