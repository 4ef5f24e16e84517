//! First-order Montes machinery: principal φ-Newton polygons, residual
//! polynomials, φ-indices and Dedekind's criterion.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{factor_mod_p, squarefree};
use crate::padic::{is_prime_u64, primes_up_to, valuation, Valuation};
use crate::poly::{discriminant_oracle, phi_development, ExtElem, ExtField, ExtPoly, IntPoly, ModPoly, PhiDevelopment};

/// A side of a principal polygon with slope `−h/e`, `gcd(h, e) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Side {
    pub start: (u64, u64),
    pub end: (u64, u64),
    pub h: u64,
    pub e: u64,
}

impl Side {
    fn between(a: (u64, u64), b: (u64, u64)) -> Side {
        let dx = b.0 - a.0;
        let dy = a.1 - b.1;
        let g = dx.gcd(&dy);
        Side { start: a, end: b, h: dy / g, e: dx / g }
    }

    pub fn length(&self) -> u64 {
        self.end.0 - self.start.0
    }

    /// `d(S) = ℓ(S)/e`.
    pub fn degree(&self) -> u64 {
        self.length() / self.e
    }

    pub fn slope(&self) -> Ratio<i64> {
        Ratio::new(-(self.h as i64), self.e as i64)
    }

    /// Exact ordinate of the side above abscissa `x`.
    pub fn ordinate(&self, x: u64) -> Ratio<i64> {
        let (x0, y0) = self.start;
        Ratio::from_integer(y0 as i64) + self.slope() * Ratio::from_integer(x as i64 - x0 as i64)
    }

    /// Whether `(x, y)` lies on the segment.
    pub fn contains(&self, x: u64, y: u64) -> bool {
        x >= self.start.0 && x <= self.end.0 && self.ordinate(x) == Ratio::from_integer(y as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    /// Cloud of finite points `(i, u_i)`.
    pub points: Vec<(u64, u64)>,
    pub vertices: Vec<(u64, u64)>,
    /// Ordered left to right, i.e. by increasing slope.
    pub sides: Vec<Side>,
}

fn cross(o: (u64, u64), a: (u64, u64), b: (u64, u64)) -> i128 {
    let (ox, oy) = (o.0 as i128, o.1 as i128);
    (a.0 as i128 - ox) * (b.1 as i128 - oy) - (a.1 as i128 - oy) * (b.0 as i128 - ox)
}

/// Principal part of the lower convex hull of the development's points.
pub fn principal_polygon(dev: &PhiDevelopment) -> Result<NewtonPolygon> {
    polygon_from_points(dev.points())
}

pub fn polygon_from_points(mut points: Vec<(u64, u64)>) -> Result<NewtonPolygon> {
    points.sort_unstable();
    if points.is_empty() {
        return Err(Error::invalid("development has no finite coefficient"));
    }
    if points.iter().all(|&(_, u)| u > 0) {
        return Err(Error::invalid("polynomial vanishes modulo p"));
    }
    // only the part up to the first zero ordinate can carry negative slopes
    let stop = points.iter().position(|&(_, u)| u == 0).unwrap_or(0);
    let mut hull: Vec<(u64, u64)> = Vec::new();
    for &pt in &points[..=stop] {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    let sides = hull.windows(2).map(|w| Side::between(w[0], w[1])).collect();
    Ok(NewtonPolygon { points, vertices: hull, sides })
}

impl NewtonPolygon {
    /// Abscissa of the last vertex; the multiplicity of φ̄ in f̄.
    pub fn length(&self) -> u64 {
        self.vertices.last().map_or(0, |v| v.0)
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    /// Exact ordinate over `x`, or `None` outside the polygon's range.
    pub fn ordinate(&self, x: u64) -> Option<Ratio<i64>> {
        self.sides.iter().find(|s| x >= s.start.0 && x <= s.end.0).map(|s| s.ordinate(x))
    }

    pub fn on_polygon(&self, x: u64, y: u64) -> bool {
        self.sides.iter().any(|s| s.contains(x, y))
    }

    /// `⌊y(x)⌋` for each abscissa `x ≥ 1` under the polygon.
    pub fn column_heights(&self) -> Vec<(u64, u64)> {
        let (Some(first), Some(last)) = (self.vertices.first(), self.vertices.last()) else {
            return Vec::new();
        };
        (first.0.max(1)..last.0)
            .map(|x| (x, self.ordinate(x).map_or(0, |y| y.floor().to_integer().max(0) as u64)))
            .collect()
    }

    /// Lattice points `(x, y)` with `x, y ≥ 1` on or under the polygon.
    pub fn lattice_points(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let top = self.vertices.first().map_or(0, |v| v.1);
        let (Some(first), Some(last)) = (self.vertices.first(), self.vertices.last()) else {
            return out;
        };
        for y in 1..=top {
            for x in first.0.max(1)..=last.0 {
                let Some(oy) = self.ordinate(x) else { continue };
                if Ratio::from_integer(y as i64) <= oy {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Plain-text grid of the cloud, the hull and the counted points.
    pub fn render_ascii(&self, deg_phi: usize) -> String {
        let mut s = String::new();
        let verts: Vec<String> = self.vertices.iter().map(|(x, y)| format!("({x},{y})")).collect();
        let _ = writeln!(s, "vertices: {}", verts.join(" "));
        for side in &self.sides {
            let _ = writeln!(
                s,
                "side {:?}-{:?}: slope -{}/{}, length {}, degree {}",
                side.start,
                side.end,
                side.h,
                side.e,
                side.length(),
                side.degree()
            );
        }
        let width = self.points.last().map_or(0, |p| p.0);
        let top = self.points.iter().map(|p| p.1).max().unwrap_or(0);
        if width <= 100 && top <= 40 {
            let lattice = self.lattice_points();
            for y in (0..=top).rev() {
                let _ = write!(s, "{y:>3} |");
                for x in 0..=width {
                    let c = if self.vertices.contains(&(x, y)) {
                        '*'
                    } else if self.points.contains(&(x, y)) {
                        if self.on_polygon(x, y) {
                            '*'
                        } else {
                            'o'
                        }
                    } else if self.on_polygon(x, y) {
                        '-'
                    } else if lattice.contains(&(x, y)) {
                        '+'
                    } else {
                        '.'
                    };
                    s.push(c);
                }
                s.push('\n');
            }
            let _ = writeln!(s, "    +{}", "-".repeat(width as usize + 1));
        } else {
            let _ = writeln!(s, "(grid omitted: {} columns)", width + 1);
        }
        let _ = writeln!(s, "ind = {}", ind_phi(self, deg_phi));
        s
    }

    /// Minimal SVG drawing with axes, cloud points, sides and counted
    /// lattice points.
    pub fn render_svg(&self, deg_phi: usize) -> String {
        let width = self.points.last().map_or(1, |p| p.0).max(1) as f64;
        let top = self.points.iter().map(|p| p.1).max().unwrap_or(1).max(1) as f64;
        let (w, h, m) = (800.0, 400.0, 40.0);
        let sx = (w - 2.0 * m) / width;
        let sy = (h - 2.0 * m) / top;
        let px = |x: u64| m + x as f64 * sx;
        let py = |y: u64| h - m - y as f64 * sy;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{}" viewBox="0 0 {w} {}">"#,
            h + 20.0,
            h + 20.0
        );
        let _ = writeln!(
            s,
            r#"<line x1="{m}" y1="{}" x2="{}" y2="{}" stroke="black"/><line x1="{m}" y1="{}" x2="{m}" y2="{m}" stroke="black"/>"#,
            h - m,
            w - m,
            h - m,
            h - m
        );
        let lattice = self.lattice_points();
        if lattice.len() <= 20_000 {
            for (x, y) in &lattice {
                let _ = writeln!(
                    s,
                    r#"<rect x="{:.2}" y="{:.2}" width="3" height="3" fill="lightgray"/>"#,
                    px(*x) - 1.5,
                    py(*y) - 1.5
                );
            }
        }
        for (x, y) in &self.points {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="black"/>"#, px(*x), py(*y));
        }
        let path: Vec<String> = self.vertices.iter().map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="blue" stroke-width="2"/>"#, path.join(" "));
        for (x, y) in &self.vertices {
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" font-size="10">({x},{y})</text>"#,
                px(*x) + 4.0,
                py(*y) - 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{m}" y="{}" font-size="12">ind = {}</text>"#,
            h + 10.0,
            ind_phi(self, deg_phi)
        );
        s.push_str("</svg>\n");
        s
    }
}

/// Development of `f` at `φ` followed by its principal polygon.
pub fn phi_development_polygon(f: &IntPoly, phi: &IntPoly, p: u64) -> Result<NewtonPolygon> {
    principal_polygon(&phi_development(f, phi, p)?)
}

/// The residue field `𝔽_φ = 𝔽_p[x]/(φ̄)`.
pub fn residue_field(phi: &IntPoly, p: u64) -> Result<Arc<ExtField>> {
    ExtField::new(phi.reduce_mod(p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualPoly {
    pub side: Side,
    /// `c_s, c_{s+e}, …, c_{s+d·e}`.
    pub coeffs: Vec<ExtElem>,
}

impl ResidualPoly {
    pub fn degree(&self) -> u64 {
        self.side.degree()
    }

    pub fn as_poly(&self) -> Result<ExtPoly> {
        let field = self
            .coeffs
            .first()
            .map(|c| c.field().clone())
            .ok_or_else(|| Error::Internal("empty residual polynomial".into()))?;
        Ok(ExtPoly::new(&field, self.coeffs.clone()))
    }

    pub fn is_separable(&self) -> Result<bool> {
        self.as_poly()?.is_separable()
    }
}

/// Residual polynomial of `side` over `field = 𝔽_φ`.
pub fn residual_polynomial(dev: &PhiDevelopment, side: &Side, field: &Arc<ExtField>) -> Result<ResidualPoly> {
    let p = dev.p;
    let pb = BigInt::from(p);
    let mut coeffs = Vec::with_capacity(side.degree() as usize + 1);
    for k in 0..=side.degree() {
        let i = (side.start.0 + k * side.e) as usize;
        let y = side.start.1 - k * side.h;
        let c = match dev.valuations.get(i) {
            Some(Valuation::Finite(u)) if *u == y => {
                let a = dev.coeffs[i]
                    .div_exact_scalar(&Pow::pow(&pb, *u as u32))
                    .ok_or_else(|| Error::Internal("coefficient valuation mismatch".into()))?;
                ExtElem::new(field, &a.reduce_mod(p))?
            }
            _ => ExtElem::zero(field),
        };
        coeffs.push(c);
    }
    if coeffs.first().is_none_or(ExtElem::is_zero) || coeffs.last().is_none_or(ExtElem::is_zero) {
        return Err(Error::Internal("residual polynomial vanishes at a vertex".into()));
    }
    Ok(ResidualPoly { side: *side, coeffs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub regular: bool,
    /// Separability of each side's residual polynomial.
    pub sides: Vec<(Side, bool)>,
}

pub fn is_phi_regular(f: &IntPoly, phi: &IntPoly, p: u64) -> Result<Regularity> {
    let dev = phi_development(f, phi, p)?;
    let poly = principal_polygon(&dev)?;
    regularity_of(&dev, &poly)
}

fn regularity_of(dev: &PhiDevelopment, poly: &NewtonPolygon) -> Result<Regularity> {
    let field = residue_field(&dev.phi, dev.p)?;
    let mut sides = Vec::with_capacity(poly.sides.len());
    for side in &poly.sides {
        // degree-one residuals are always separable
        let sep = side.degree() == 1 || residual_polynomial(dev, side, &field)?.is_separable()?;
        sides.push((*side, sep));
    }
    Ok(Regularity { regular: sides.iter().all(|s| s.1), sides })
}

/// `deg φ` times the number of lattice points with `x, y ≥ 1` on or under
/// the polygon.
pub fn ind_phi(polygon: &NewtonPolygon, deg_phi: usize) -> u64 {
    polygon.lattice_points().len() as u64 * deg_phi as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiContribution {
    pub phi: IntPoly,
    pub multiplicity: u32,
    pub polygon: NewtonPolygon,
    pub ind: u64,
    pub regular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexResult {
    pub p: u64,
    pub contributions: Vec<PhiContribution>,
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
    /// `ν_p(disc f)` when it was needed or supplied.
    pub disc_valuation: Option<u64>,
}

impl IndexResult {
    pub fn value(&self) -> Option<u64> {
        self.exact.then_some(self.lower)
    }
}

#[derive(Clone, Debug, Default)]
pub struct IndexOptions {
    pub seed: u64,
    /// Preferred lifts of the irreducible factors of `f̄`, e.g. Hensel-improved
    /// ones; any factor without a matching lift gets the symmetric lift.
    pub lifts: Vec<IntPoly>,
    /// Known `ν_p(disc f)`, saving the discriminant computation.
    pub disc_valuation: Option<u64>,
}

fn check_squarefree_over_q(f: &IntPoly) -> Result<()> {
    for q in primes_up_to(2000) {
        let fb = f.reduce_mod(q);
        if fb.degree() == f.degree() && fb.gcd(&fb.derivative())?.degree() == Some(0) {
            return Ok(());
        }
    }
    if discriminant_oracle(f)?.is_zero() {
        return Err(Error::invalid("polynomial has a repeated factor over Q"));
    }
    Ok(())
}

/// Lower bound `Σ ind_φ` with exactness when `f` is p-regular, otherwise
/// closed by `⌊ν_p(disc f)/2⌋` when the two meet.
pub fn index_at_prime(f: &IntPoly, p: u64, opts: &IndexOptions) -> Result<IndexResult> {
    if !is_prime_u64(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if !f.is_monic() || f.degree().unwrap_or(0) < 1 {
        return Err(Error::invalid("index_at_prime expects a monic non-constant polynomial"));
    }
    check_squarefree_over_q(f)?;
    let factors = factor_mod_p(&f.reduce_mod(p), opts.seed)?;
    let mut contributions = Vec::new();
    let mut regular = true;
    for (fac, mult) in factors {
        // simple factors give a length-one polygon and contribute nothing
        if mult == 1 {
            continue;
        }
        let phi = opts
            .lifts
            .iter()
            .find(|l| l.is_monic() && l.reduce_mod(p) == fac)
            .cloned()
            .unwrap_or_else(|| IntPoly::lift_symmetric(&fac));
        let dev = phi_development(f, &phi, p)?;
        if dev.valuations[0] == Valuation::Infinity {
            return Err(Error::invalid("the chosen lift divides f"));
        }
        let polygon = principal_polygon(&dev)?;
        if polygon.length() != mult as u64 {
            return Err(Error::Internal(format!(
                "polygon length {} differs from multiplicity {mult}",
                polygon.length()
            )));
        }
        let reg = regularity_of(&dev, &polygon)?;
        regular &= reg.regular;
        let ind = ind_phi(&polygon, fac.degree().unwrap_or(0));
        contributions.push(PhiContribution { phi, multiplicity: mult, polygon, ind, regular: reg.regular });
    }
    let lower: u64 = contributions.iter().map(|c| c.ind).sum();
    let disc_valuation = match (regular, opts.disc_valuation) {
        (_, Some(v)) => Some(v),
        (true, None) => None,
        (false, None) => valuation(&discriminant_oracle(f)?, p).finite(),
    };
    let upper = if regular { lower } else { disc_valuation.map_or(lower, |v| v / 2) };
    if upper < lower {
        return Err(Error::TheoremViolation(format!("index lower bound {lower} exceeds {upper}")));
    }
    Ok(IndexResult { p, contributions, lower, upper, exact: regular || lower == upper, disc_valuation })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DedekindResult {
    pub p: u64,
    pub maximal: bool,
    /// Degree of `gcd(f̄*, ḡ, h̄)`; the enlarged order has index `p^m`.
    pub m: usize,
    /// `U` with `ℤ[θ] + U(θ)/p·ℤ[θ]` the enlarged order.
    pub enlargement: IntPoly,
}

pub fn dedekind_test(f: &IntPoly, p: u64, seed: u64) -> Result<DedekindResult> {
    let _ = seed;
    if !is_prime_u64(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if !f.is_monic() {
        return Err(Error::invalid("Dedekind's criterion needs a monic polynomial"));
    }
    let fbar = f.reduce_mod(p);
    let mut gbar = ModPoly::one(p);
    for (part, _) in squarefree(&fbar)? {
        gbar = gbar.mul(&part)?;
    }
    let gbar = gbar.monic();
    let hbar = fbar.div_exact(&gbar)?;
    let g = IntPoly::lift_symmetric(&gbar);
    let h = IntPoly::lift_symmetric(&hbar);
    let diff = &(&g * &h) - f;
    let fstar = diff
        .div_exact_scalar(&BigInt::from(p))
        .ok_or_else(|| Error::Internal("g·h − f is not divisible by p".into()))?;
    let z = fstar.reduce_mod(p).gcd(&gbar)?.gcd(&hbar)?;
    let m = z.degree().unwrap_or(0);
    let enlargement = IntPoly::lift_symmetric(&fbar.div_exact(&z)?);
    Ok(DedekindResult { p, maximal: m == 0, m, enlargement })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::build_instance_unchecked;
    use crate::factor::first_irreducible;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn t0() -> BigInt {
        BigInt::from(451251)
    }

    #[test]
    fn t0_polygon_at_three() {
        let inst = build_instance_unchecked(3, 3, &t0()).unwrap();
        let dev = phi_development(&inst.phi_poly, &IntPoly::x(), 3).unwrap();
        let poly = principal_polygon(&dev).unwrap();
        assert_eq!(poly.vertices, vec![(0, 6), (1, 3), (3, 2), (9, 1), (27, 0)]);
        assert_eq!(ind_phi(&poly, 1), 13);
        let heights: u64 = poly.column_heights().iter().map(|c| c.1).sum();
        assert_eq!(heights, 13);
        // S' has degree one
        assert_eq!(poly.sides[0].degree(), 1);
        let field = residue_field(&IntPoly::x(), 3).unwrap();
        assert_eq!(residual_polynomial(&dev, &poly.sides[0], &field).unwrap().coeffs.len(), 2);
    }

    #[test]
    fn cubic_at_x_plus_one() {
        let f = p(&[-27, -3, 0, 1]);
        let phi = p(&[1, 1]);
        let dev = phi_development(&f, &phi, 5).unwrap();
        let poly = principal_polygon(&dev).unwrap();
        assert_eq!(poly.vertices, vec![(0, 2), (2, 0)]);
        assert_eq!(poly.sides[0].h, 1);
        assert_eq!(poly.sides[0].e, 1);
        assert_eq!(ind_phi(&poly, 1), 1);
        let field = residue_field(&phi, 5).unwrap();
        let r = residual_polynomial(&dev, &poly.sides[0], &field).unwrap();
        let reps: Vec<u64> = r.coeffs.iter().map(|c| c.rep().coeff(0)).collect();
        assert_eq!(reps, vec![4, 0, 2]);
        assert!(r.is_separable().unwrap());
        let idx = index_at_prime(&f, 5, &IndexOptions { lifts: vec![phi], ..Default::default() }).unwrap();
        assert!(idx.exact);
        assert_eq!(idx.lower, 1);
    }

    #[test]
    fn t0_index_at_three() {
        let inst = build_instance_unchecked(3, 3, &t0()).unwrap();
        let idx = index_at_prime(&inst.phi_poly, 3, &IndexOptions::default()).unwrap();
        assert!(idx.exact);
        assert_eq!(idx.value(), Some(13));
    }

    #[test]
    fn zero_constant_valuation_gives_empty_polygon() {
        let poly = polygon_from_points(vec![(0, 0), (1, 2), (2, 0)]).unwrap();
        assert!(poly.is_empty());
        assert_eq!(ind_phi(&poly, 1), 0);
        assert!(polygon_from_points(vec![(0, 1), (1, 1)]).is_err());
    }

    #[test]
    fn collinear_points_are_not_vertices() {
        let poly = polygon_from_points(vec![(0, 4), (1, 3), (2, 2), (3, 5), (4, 0)]).unwrap();
        assert_eq!(poly.vertices, vec![(0, 4), (4, 0)]);
        assert!(poly.on_polygon(2, 2));
        assert!(!poly.on_polygon(3, 5));
        assert_eq!(ind_phi(&poly, 2), 2 * 6);
    }

    #[test]
    fn inseparable_residual() {
        // (x + 3)^2 at φ = x: all three points on one side, R = (y + 1)^2
        let f = p(&[9, 6, 1]);
        let dev = phi_development(&f, &IntPoly::x(), 3).unwrap();
        let poly = principal_polygon(&dev).unwrap();
        let field = residue_field(&IntPoly::x(), 3).unwrap();
        let r = residual_polynomial(&dev, &poly.sides[0], &field).unwrap();
        assert!(!r.is_separable().unwrap());
        assert!(!is_phi_regular(&f, &IntPoly::x(), 3).unwrap().regular);
    }

    #[test]
    fn unramified_prime_has_index_zero() {
        let f = p(&[-1, -3, 0, 1]);
        let idx = index_at_prime(&f, 5, &IndexOptions::default()).unwrap();
        assert_eq!(idx.value(), Some(0));
        assert!(dedekind_test(&f, 5, 0).unwrap().maximal);
    }

    #[test]
    fn dedekind_examples() {
        // T_3 - 1 at p = 3
        let inst = build_instance_unchecked(3, 1, &BigInt::from(1)).unwrap();
        assert!(dedekind_test(&inst.phi_poly, 3, 0).unwrap().maximal);
        // t ≡ 2 mod 25
        let inst = build_instance_unchecked(3, 1, &BigInt::from(27)).unwrap();
        let d = dedekind_test(&inst.phi_poly, 5, 0).unwrap();
        assert!(!d.maximal);
        assert_eq!(d.m, 1);
        // x^3 - 3x - 9 = T_3 - 9 at p = 3
        let inst = build_instance_unchecked(3, 1, &BigInt::from(9)).unwrap();
        assert!(!dedekind_test(&inst.phi_poly, 3, 0).unwrap().maximal);
    }

    #[test]
    fn repeated_factor_over_q_rejected() {
        let f = &p(&[1, 1]) * &p(&[1, 1]);
        assert!(index_at_prime(&f, 3, &IndexOptions::default()).is_err());
    }

    fn random_instance(rng: &mut ChaCha8Rng) -> (IntPoly, IntPoly, u64, u32) {
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let dphi = rng.gen_range(1..=2);
        // random monic irreducible φ̄ of degree dphi
        let phibar = loop {
            let mut c: Vec<u64> = (0..dphi).map(|_| rng.gen_range(0..p)).collect();
            c.push(1);
            let cand = ModPoly::new(p, c);
            if crate::factor::is_irreducible(&cand).unwrap() {
                break cand;
            }
        };
        let phi = IntPoly::lift_symmetric(&phibar);
        let k = rng.gen_range(1..=4u32);
        let g = loop {
            let dg = rng.gen_range(0..=3);
            let mut c: Vec<i64> = (0..dg).map(|_| rng.gen_range(-20..=20)).collect();
            c.push(1);
            let g = p_of(&c);
            if g.reduce_mod(p).gcd(&phibar).unwrap().degree() == Some(0) {
                break g;
            }
        };
        let deg = dphi * k as usize + g.degree().unwrap();
        let noise: Vec<i64> = (0..deg).map(|_| rng.gen_range(-9..=9) * p as i64).collect();
        let f = &(&phi.pow(k) * &g) + &p_of(&noise);
        (f, phi, p, k)
    }

    fn p_of(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn polygon_length_is_multiplicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..300 {
            let (f, phi, p, k) = random_instance(&mut rng);
            let dev = phi_development(&f, &phi, p).unwrap();
            let poly = principal_polygon(&dev).unwrap();
            assert_eq!(poly.length(), k as u64, "f = {f}, phi = {phi}, p = {p}");
            let heights: u64 = poly.column_heights().iter().map(|c| c.1).sum();
            assert_eq!(heights * phi.degree().unwrap() as u64, ind_phi(&poly, phi.degree().unwrap()));
        }
    }

    #[test]
    fn lift_independence_when_regular() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut compared = 0;
        for _ in 0..300 {
            let (f, phi, p, _) = random_instance(&mut rng);
            let dphi = phi.degree().unwrap();
            let shift: Vec<i64> = (0..dphi).map(|_| rng.gen_range(-3..=3) * p as i64).collect();
            let phi2 = &phi + &p_of(&shift);
            let (r1, r2) = (is_phi_regular(&f, &phi, p).unwrap(), is_phi_regular(&f, &phi2, p).unwrap());
            if !(r1.regular && r2.regular) {
                continue;
            }
            let i1 = ind_phi(&principal_polygon(&phi_development(&f, &phi, p).unwrap()).unwrap(), dphi);
            let i2 = ind_phi(&principal_polygon(&phi_development(&f, &phi2, p).unwrap()).unwrap(), dphi);
            assert_eq!(i1, i2, "f = {f}, phi = {phi}, phi2 = {phi2}, p = {p}");
            compared += 1;
        }
        assert!(compared > 100);
    }

    #[test]
    fn dedekind_agrees_with_montes() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        let mut m_checked = 0;
        while checked < 200 {
            let p = [2u64, 3, 5][rng.gen_range(0..3)];
            let d = rng.gen_range(2..=5);
            let mut c: Vec<i64> = (0..d).map(|_| rng.gen_range(-30..=30)).collect();
            c.push(1);
            let f = p_of(&c);
            let Ok(idx) = index_at_prime(&f, p, &IndexOptions::default()) else { continue };
            let ded = dedekind_test(&f, p, 0).unwrap();
            if idx.lower > 0 {
                assert!(!ded.maximal, "f = {f}, p = {p}");
            }
            if !idx.exact {
                continue;
            }
            assert_eq!(ded.maximal, idx.lower == 0, "f = {f}, p = {p}");
            if idx.lower <= 1 {
                assert_eq!(ded.m as u64, idx.lower, "f = {f}, p = {p}");
                m_checked += 1;
            }
            checked += 1;
        }
        assert!(m_checked > 50);
    }

    #[test]
    fn enlargement_is_integral_after_one_step() {
        // x^3 - 3x - 9: index 3 at p = 3, enlargement element is (θ^2 - 3)/3 up to units
        let inst = build_instance_unchecked(3, 1, &BigInt::from(9)).unwrap();
        let d = dedekind_test(&inst.phi_poly, 3, 0).unwrap();
        assert_eq!(d.m, 1);
        let idx = index_at_prime(&inst.phi_poly, 3, &IndexOptions::default()).unwrap();
        assert_eq!(idx.value(), Some(1));
    }

    #[test]
    fn first_irreducible_gives_field() {
        let m = first_irreducible(3, 2).unwrap();
        assert!(residue_field(&IntPoly::lift_symmetric(&m), 3).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn lattice_count_decomposes_by_columns(ys in prop::collection::vec(0u64..12, 2..12)) {
            let mut pts: Vec<(u64, u64)> = ys.iter().enumerate().map(|(i, &y)| (i as u64, y)).collect();
            pts.push((ys.len() as u64, 0));
            let poly = polygon_from_points(pts).unwrap();
            let heights: u64 = poly.column_heights().iter().map(|c| c.1).sum();
            prop_assert_eq!(heights, ind_phi(&poly, 1));
            for w in poly.sides.windows(2) {
                prop_assert!(w[0].slope() < w[1].slope());
            }
            for s in &poly.sides {
                prop_assert_eq!(s.length() % s.e, 0);
                prop_assert_eq!(s.h.gcd(&s.e), 1);
            }
        }
    }
}
