//! Evaluation of the action functional on the torsion dual, the quadratic
//! model, orbit reduction, the Gauss sum and the assembled report.

use crate::action::{
    action_functional, admissible_assignment, auxiliary_forms, eps_half, eps_zero,
    validate_assignment, Assignment, EntryOffsets,
};
use crate::braid::{braid_to_diagram, BraidWord};
use crate::diagram::{
    decompose_bridges, place_bridge_vertices, shoot_vertical_lines, Bridge, BridgeId, LongDiagram,
    VerticalLine,
};
use crate::error::{Error, Result};
use crate::exactgeom::{mod1, rat_string, Point, Rat};
use crate::forms::{LinearForm, QuadraticForm};
use crate::lattice::{
    solve_constraints, torsion_elements, IntMatrix, SolutionGroup, TorsionElement,
};
use crate::rng::SplitMix64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

pub const DEFAULT_GROUP_CAP: u64 = 1_000_000;

/// Values of the invariant function on the torsion dual, indexed
/// lexicographically by coordinates with respect to the enumeration
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTable {
    /// Invariant factors > 1, in divisibility order.
    pub factors: Vec<u64>,
    /// One value in [0, 1) per element, lexicographic coordinate order.
    pub values: Vec<Rat>,
}

impl QTable {
    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn index_of(&self, coords: &[u64]) -> usize {
        debug_assert_eq!(coords.len(), self.factors.len());
        let mut idx = 0u64;
        for (c, f) in coords.iter().zip(&self.factors) {
            debug_assert!(c < f);
            idx = idx * f + c;
        }
        idx as usize
    }

    pub fn value(&self, coords: &[u64]) -> &Rat {
        &self.values[self.index_of(coords)]
    }

    pub fn coords_of(&self, mut idx: usize) -> Vec<u64> {
        let mut coords = vec![0u64; self.factors.len()];
        for i in (0..self.factors.len()).rev() {
            coords[i] = (idx as u64) % self.factors[i];
            idx /= self.factors[i] as usize;
        }
        coords
    }

    pub fn add_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((x, y), f)| (x + y) % f)
            .collect()
    }

    pub fn sub_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((x, y), f)| (x + f - y) % f)
            .collect()
    }

    pub fn scale_coords(&self, a: &[u64], k: u64) -> Vec<u64> {
        a.iter()
            .zip(&self.factors)
            .map(|(x, f)| (x * (k % f)) % f)
            .collect()
    }

    /// The associated bilinear value b(x, y) = q(x+y) - q(x) - q(y), in [0,1).
    pub fn bilinear(&self, a: &[u64], b: &[u64]) -> Rat {
        mod1(&(self.value(&self.add_coords(a, b)) - self.value(a) - self.value(b)))
    }
}

/// Evaluates the action functional mod 1 at a lift, after verifying the lift
/// lies in the constraint set.
pub fn evaluate_mod1(phi: &QuadraticForm, sg: &SolutionGroup, lift: &[Rat]) -> Result<Rat> {
    sg.contains_lift(lift)?;
    Ok(phi.eval_mod1(lift))
}

/// Exact quadraticity checks: q(0) = 0 and the parallelogram law
/// q(x+y) + q(x-y) = 2q(x) + 2q(y) over all pairs (all of them up to order
/// 1000, a seeded sample of 2000 pairs beyond that).
pub fn check_quadraticity(qt: &QTable) -> Result<()> {
    if !qt.values.is_empty() && !qt.values[0].is_zero() {
        return Err(Error::QuadraticModelViolation {
            coords: vec![0; qt.factors.len()],
            got: rat_string(&qt.values[0]),
            expected: "0".into(),
        });
    }
    let n = qt.values.len();
    let check = |i: usize, j: usize| -> Result<()> {
        let x = qt.coords_of(i);
        let y = qt.coords_of(j);
        let lhs = mod1(&(qt.value(&qt.add_coords(&x, &y)) + qt.value(&qt.sub_coords(&x, &y))));
        let rhs = mod1(&((qt.value(&x) + qt.value(&x)) + (qt.value(&y) + qt.value(&y))));
        if lhs != rhs {
            return Err(Error::QuadraticModelViolation {
                coords: x,
                got: rat_string(&lhs),
                expected: rat_string(&rhs),
            });
        }
        Ok(())
    };
    if n <= 1000 {
        for i in 0..n {
            for j in 0..n {
                check(i, j)?;
            }
        }
    } else {
        let mut rng = SplitMix64::new(0x9e3779b9);
        for _ in 0..2000 {
            let i = rng.below(n as u64) as usize;
            let j = rng.below(n as u64) as usize;
            check(i, j)?;
        }
    }
    Ok(())
}

/// Fits q(x) = alpha x^2 / n on a cyclic table, returning the balanced
/// representative |alpha| <= (n-1)/2. Every value is verified against the
/// model before returning.
pub fn fit_cyclic_alpha(qt: &QTable) -> Result<i64> {
    if qt.factors.is_empty() {
        return Ok(0);
    }
    debug_assert!(qt.is_cyclic());
    let n = qt.factors[0];
    let q_g = qt.value(&[1]);
    let scaled = q_g * crate::exactgeom::rat(n as i64);
    if !crate::exactgeom::is_integer(&scaled) {
        return Err(Error::QuadraticModelViolation {
            coords: vec![1],
            got: rat_string(q_g),
            expected: format!("a multiple of 1/{n}"),
        });
    }
    let alpha_residue = i64::try_from(scaled.numer()).map_err(|_| {
        Error::Internal("alpha does not fit i64".into())
    })?;
    for c in 0..n {
        let expected = mod1(&(q_g * crate::exactgeom::rat((c * c) as i64)));
        let got = qt.value(&[c]);
        if *got != expected {
            return Err(Error::QuadraticModelViolation {
                coords: vec![c],
                got: rat_string(got),
                expected: rat_string(&expected),
            });
        }
    }
    Ok(balanced(alpha_residue as i128, n))
}

fn balanced(x: i128, n: u64) -> i64 {
    let n = n as i128;
    let r = x.rem_euclid(n);
    (if r > (n - 1) / 2 { r - n } else { r }) as i64
}

/// The orbit-reduced invariant set: all balanced m with m k^2 = alpha (mod n)
/// for some unit k, restricted to the smallest absolute value. Returns a
/// sorted singleton, a +/- pair, or {0}.
pub fn aut_orbit_minv(n: u64, alpha: i64) -> Vec<i64> {
    assert!(n >= 1 && n % 2 == 1, "torsion order must be odd");
    if n == 1 {
        return vec![0];
    }
    let mut best: Vec<i64> = Vec::new();
    for k in 1..n {
        if num_integer::gcd(k, n) != 1 {
            continue;
        }
        let m = balanced(alpha as i128 * (k as i128 * k as i128), n);
        match best.first() {
            Some(&b) if m.abs() > b.abs() => {}
            Some(&b) if m.abs() == b.abs() => {
                if !best.contains(&m) {
                    best.push(m);
                }
            }
            _ => best = vec![m],
        }
    }
    best.sort_unstable();
    best
}

/// Aut-invariant comparison data: the torsion factors, the sorted multiset of
/// q-values, and (for groups of order at most 1000) the sorted multiset of
/// bilinear values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub torsion: Vec<u64>,
    pub q_values: Vec<String>,
    pub b_values: Option<Vec<String>>,
}

const BILINEAR_FINGERPRINT_CAP: usize = 1000;

pub fn orbit_fingerprint(qt: &QTable) -> Fingerprint {
    let mut q: Vec<Rat> = qt.values.clone();
    q.sort();
    let n = qt.values.len();
    let b_values = if n <= BILINEAR_FINGERPRINT_CAP {
        let mut b = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                b.push(qt.bilinear(&qt.coords_of(i), &qt.coords_of(j)));
            }
        }
        b.sort();
        Some(b.iter().map(rat_string).collect())
    } else {
        None
    };
    Fingerprint {
        torsion: qt.factors.clone(),
        q_values: q.iter().map(rat_string).collect(),
        b_values,
    }
}

impl Fingerprint {
    /// The fingerprint of the pointwise-negated table (the mirror
    /// prediction).
    pub fn negated(&self) -> Fingerprint {
        let neg = |strings: &Vec<String>| -> Vec<String> {
            let mut vals: Vec<Rat> = strings
                .iter()
                .map(|s| crate::exactgeom::parse_rat(s).expect("own serialization parses"))
                .map(|v| mod1(&-v))
                .collect();
            vals.sort();
            vals.iter().map(rat_string).collect()
        };
        Fingerprint {
            torsion: self.torsion.clone(),
            q_values: neg(&self.q_values),
            b_values: self.b_values.as_ref().map(neg),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussSum {
    /// |S|^2; must equal the torsion order up to float rounding.
    pub mag2: f64,
    /// arg(S) / (pi/4); must be integral up to float rounding.
    pub phase_quarter_pi: f64,
    /// S normalized by the torsion order (the reported invariant value).
    pub s_norm_re: f64,
    pub s_norm_im: f64,
}

/// S = sum over the torsion dual of e^{2 pi i q(x)}. The only floating point
/// step of the pipeline; q itself is exact.
pub fn gauss_sum(qt: &QTable) -> GaussSum {
    let mut re = 0.0;
    let mut im = 0.0;
    for v in &qt.values {
        let num = v.numer().to_string().parse::<f64>().unwrap_or(0.0);
        let den = v.denom().to_string().parse::<f64>().unwrap_or(1.0);
        let angle = 2.0 * PI * (num / den);
        re += angle.cos();
        im += angle.sin();
    }
    let order = qt.values.len().max(1) as f64;
    GaussSum {
        mag2: re * re + im * im,
        phase_quarter_pi: im.atan2(re) * 4.0 / PI,
        s_norm_re: re / order,
        s_norm_im: im / order,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "chiral-conjectural")]
    ChiralConjectural,
    #[serde(rename = "undetected")]
    Undetected,
    #[serde(rename = "trivial")]
    Trivial,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::ChiralConjectural => "chiral-conjectural",
            Verdict::Undetected => "undetected",
            Verdict::Trivial => "trivial",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub torsion: Vec<u64>,
    /// Quadratic coefficient relative to the enumeration generator; only the
    /// orbit-reduced `minv` is presentation-independent. Absent for
    /// non-cyclic torsion.
    pub alpha: Option<i64>,
    /// Orbit minimum; absent for non-cyclic torsion.
    pub minv: Option<Vec<i64>>,
    pub fingerprint: Fingerprint,
    pub gauss: GaussSum,
    pub verdict: Verdict,
}

impl InvariantReport {
    /// Presentation-independent equality: torsion, minv and fingerprint.
    /// (`alpha` depends on the generator choice, the Gauss floats on
    /// summation order.)
    pub fn equivalent(&self, other: &InvariantReport) -> bool {
        self.torsion == other.torsion
            && self.minv == other.minv
            && self.fingerprint == other.fingerprint
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let list = |v: &[u64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        out.push_str(&format!("torsion: [{}]\n", list(&self.torsion)));
        out.push_str(&match self.alpha {
            Some(a) => format!("alpha: {a}\n"),
            None => "alpha: n/a\n".into(),
        });
        out.push_str(&match &self.minv {
            Some(m) => format!(
                "minv: [{}]\n",
                m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            ),
            None => "minv: n/a\n".into(),
        });
        out.push_str(&format!(
            "q-values: {}\n",
            self.fingerprint.q_values.join(", ")
        ));
        out.push_str(&format!(
            "gauss: |S|^2 = {:.9}, phase = {:.9} * pi/4\n",
            self.gauss.mag2, self.gauss.phase_quarter_pi
        ));
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub group_cap: u64,
    /// Substitute eps = 0 instead of 1/2 (experimentation only; makes no
    /// claim about invariance).
    pub eps_zero: bool,
    /// Start index into the vertex perturbation schedule; the invariant must
    /// not depend on it.
    pub schedule_offset: usize,
    /// Re-randomize the rule-3 entry offsets by even shifts; the invariant
    /// must not depend on it.
    pub entry_offset_seed: Option<u64>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            group_cap: DEFAULT_GROUP_CAP,
            eps_zero: false,
            schedule_offset: 0,
            entry_offset_seed: None,
        }
    }
}

/// Every intermediate artifact of one invariant computation.
pub struct Pipeline {
    pub diagram: LongDiagram,
    pub bridges: Vec<Bridge>,
    pub vertices: BTreeMap<BridgeId, Point>,
    pub lines: Vec<VerticalLine>,
    pub assignment: Assignment,
    pub aux: Vec<LinearForm>,
    pub matrix: IntMatrix,
    pub solution: SolutionGroup,
    pub elements: Vec<TorsionElement>,
    pub phi: QuadraticForm,
    pub qtable: QTable,
    pub report: InvariantReport,
}

pub fn run_pipeline(diagram: LongDiagram, opts: &PipelineOptions) -> Result<Pipeline> {
    let bridges = decompose_bridges(&diagram);
    let vertices = place_bridge_vertices(&diagram, &bridges, opts.schedule_offset)?;
    let lines = shoot_vertical_lines(&diagram, &bridges, &vertices)?;

    let assignment = match opts.entry_offset_seed {
        None => admissible_assignment(&diagram, &bridges, EntryOffsets::Default)?,
        Some(seed) => {
            let mut rng = SplitMix64::new(seed);
            let shifts: Vec<i64> = (0..bridges.len()).map(|_| rng.range_i64(-2, 2)).collect();
            admissible_assignment(&diagram, &bridges, EntryOffsets::Shifted(&shifts))?
        }
    };
    let violations = validate_assignment(&diagram, &bridges, &assignment);
    if !violations.is_empty() {
        return Err(Error::Internal(format!(
            "constructed assignment is not admissible: {violations:?}"
        )));
    }

    let eps = if opts.eps_zero { eps_zero() } else { eps_half() };
    let aux = auxiliary_forms(&diagram, &assignment, &lines, &eps)?;
    let matrix = IntMatrix::from_forms(&aux, bridges.len());
    let solution = solve_constraints(matrix.clone())?;
    let phi = action_functional(&diagram, &assignment, &lines, &aux, &eps);

    let elements = torsion_elements(&solution, opts.group_cap)?;
    let factors: Vec<u64> = solution
        .torsion_factors
        .iter()
        .map(|d| u64::try_from(d).expect("factor bounded by the cap"))
        .collect();
    let values: Vec<Rat> = elements.iter().map(|e| phi.eval_mod1(&e.lift)).collect();
    let qtable = QTable { factors, values };

    if !qtable.values[0].is_zero() {
        return Err(Error::QuadraticModelViolation {
            coords: vec![0; qtable.factors.len()],
            got: rat_string(&qtable.values[0]),
            expected: "0".into(),
        });
    }

    let (alpha, minv) = if qtable.is_cyclic() {
        let n = qtable.factors.first().copied().unwrap_or(1);
        let alpha = fit_cyclic_alpha(&qtable)?;
        (Some(alpha), Some(aut_orbit_minv(n, alpha)))
    } else {
        (None, None)
    };
    let fingerprint = orbit_fingerprint(&qtable);
    let gauss = gauss_sum(&qtable);
    let verdict = if qtable.order() == 1 {
        Verdict::Trivial
    } else {
        match &minv {
            Some(m) if m.len() == 1 && m[0] != 0 => Verdict::ChiralConjectural,
            _ => Verdict::Undetected,
        }
    };
    let report = InvariantReport {
        torsion: qtable.factors.clone(),
        alpha,
        minv,
        fingerprint,
        gauss,
        verdict,
    };

    Ok(Pipeline {
        diagram,
        bridges,
        vertices,
        lines,
        assignment,
        aux,
        matrix,
        solution,
        elements,
        phi,
        qtable,
        report,
    })
}

pub fn run_pipeline_braid(b: &BraidWord, opts: &PipelineOptions) -> Result<Pipeline> {
    run_pipeline(braid_to_diagram(b)?, opts)
}

/// Runs the whole pipeline and returns only the report.
pub fn full_report(diagram: LongDiagram, opts: &PipelineOptions) -> Result<InvariantReport> {
    Ok(run_pipeline(diagram, opts)?.report)
}

pub fn full_report_braid(b: &BraidWord, opts: &PipelineOptions) -> Result<InvariantReport> {
    Ok(run_pipeline_braid(b, opts)?.report)
}

/// A specific failure of the well-definedness property.
#[derive(Clone, Debug)]
pub struct WellDefinednessFailure {
    pub coords: Vec<u64>,
    pub base_value: Rat,
    pub perturbed_value: Rat,
    pub perturbed_lift: Vec<Rat>,
}

/// Checks that the value of the action functional mod 1 depends only on the
/// torsion coordinates: for every torsion element, `trials` perturbed lifts
/// (integer shifts plus rational multiples of the free direction) must give
/// exactly the canonical value.
pub fn well_definedness_check(
    phi: &QuadraticForm,
    sg: &SolutionGroup,
    elements: &[TorsionElement],
    trials: usize,
    seed: u64,
) -> Result<std::result::Result<(), WellDefinednessFailure>> {
    let mut rng = SplitMix64::new(seed);
    let free = &sg.free_basis[0];
    for elem in elements {
        let base = evaluate_mod1(phi, sg, &elem.lift)?;
        for _ in 0..trials {
            let mut lift = elem.lift.clone();
            for v in lift.iter_mut() {
                *v += crate::exactgeom::rat(rng.range_i64(-3, 3));
            }
            let num = rng.range_i64(-5, 5);
            let den = rng.range_i64(1, 7);
            let scale = crate::exactgeom::frac(num, den);
            for (v, f) in lift.iter_mut().zip(free) {
                *v += &scale * f;
            }
            let value = evaluate_mod1(phi, sg, &lift)?;
            if value != base {
                return Ok(Err(WellDefinednessFailure {
                    coords: elem.coords.clone(),
                    base_value: base,
                    perturbed_value: value,
                    perturbed_lift: lift,
                }));
            }
        }
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_diagram, OverChoice};
    use crate::exactgeom::{frac, rat};

    fn trefoil_pipeline() -> Pipeline {
        let spec = crate::diagram::tests::trefoil_spec();
        let d = parse_diagram(&spec).unwrap();
        run_pipeline(d, &PipelineOptions::default()).unwrap()
    }

    #[test]
    fn trefoil_full_report() {
        let p = trefoil_pipeline();
        let r = &p.report;
        assert_eq!(r.torsion, vec![3]);
        assert_eq!(r.alpha, Some(-1));
        assert_eq!(r.minv, Some(vec![-1]));
        assert_eq!(r.verdict, Verdict::ChiralConjectural);
        assert_eq!(r.fingerprint.q_values, vec!["0", "2/3", "2/3"]);
        assert!((r.gauss.mag2 - 3.0).abs() < 1e-9);
        assert!((r.gauss.phase_quarter_pi - (-2.0)).abs() < 1e-9);
    }

    #[test]
    fn trefoil_evaluate_reference_lifts() {
        let p = trefoil_pipeline();
        // Bridge order is traversal order; the reference lift assigns
        // (s, r, q, p) = (0, 1/3, 2/3, 0).
        let lift = vec![rat(0), frac(1, 3), frac(2, 3), rat(0)];
        assert_eq!(evaluate_mod1(&p.phi, &p.solution, &lift).unwrap(), frac(2, 3));
        let lift2 = vec![rat(1), frac(1, 3), frac(2, 3), rat(0)];
        assert_eq!(
            evaluate_mod1(&p.phi, &p.solution, &lift2).unwrap(),
            frac(2, 3)
        );
        let zero = vec![rat(0); 4];
        assert_eq!(evaluate_mod1(&p.phi, &p.solution, &zero).unwrap(), rat(0));
        // reject lifts outside the constraint set
        let bad = vec![frac(1, 3), rat(0), rat(0), rat(0)];
        assert!(matches!(
            evaluate_mod1(&p.phi, &p.solution, &bad),
            Err(Error::LiftNotInSolutionSet { .. })
        ));
    }

    #[test]
    fn trefoil_well_definedness_hand_shifts() {
        let p = trefoil_pipeline();
        let g = &p.solution.torsion_gen_lifts[0];
        // integer shift
        let shifted: Vec<Rat> = g.iter().map(|x| x + rat(1)).collect();
        assert_eq!(
            evaluate_mod1(&p.phi, &p.solution, &shifted).unwrap(),
            evaluate_mod1(&p.phi, &p.solution, g).unwrap()
        );
        // free-direction shift by 1/7
        let free = &p.solution.free_basis[0];
        let along: Vec<Rat> = g
            .iter()
            .zip(free)
            .map(|(x, f)| x + frac(1, 7) * f)
            .collect();
        assert_eq!(
            evaluate_mod1(&p.phi, &p.solution, &along).unwrap(),
            evaluate_mod1(&p.phi, &p.solution, g).unwrap()
        );
        // randomized trials
        let ok = well_definedness_check(&p.phi, &p.solution, &p.elements, 20, 7).unwrap();
        assert!(ok.is_ok());
    }

    #[test]
    fn quadraticity_checks() {
        let p = trefoil_pipeline();
        check_quadraticity(&p.qtable).unwrap();

        let sick = QTable {
            factors: vec![3],
            values: vec![rat(0), frac(1, 3), frac(2, 3)],
        };
        assert!(fit_cyclic_alpha(&sick).is_err());
    }

    #[test]
    fn alpha_and_minv_cases() {
        assert_eq!(aut_orbit_minv(3, -1), vec![-1]);
        assert_eq!(aut_orbit_minv(5, 1), vec![-1, 1]);
        assert_eq!(aut_orbit_minv(1, 0), vec![0]);
        assert_eq!(aut_orbit_minv(15, -2), vec![-2]);
        assert_eq!(aut_orbit_minv(15, 1), vec![1]);
        assert_eq!(aut_orbit_minv(9, 1), vec![1]);
        assert_eq!(aut_orbit_minv(25, 2), vec![-2, 2]);
        assert_eq!(aut_orbit_minv(25, 1), vec![-1, 1]);
        assert_eq!(aut_orbit_minv(77, -1), vec![-1]);
        assert_eq!(aut_orbit_minv(77, 1), vec![1]);
    }

    #[test]
    fn minv_invariant_under_generator_change() {
        let p = trefoil_pipeline();
        let n = p.qtable.factors[0];
        let alpha = fit_cyclic_alpha(&p.qtable).unwrap();
        for k in 1..n {
            if num_integer::gcd(k, n) != 1 {
                continue;
            }
            // alpha with respect to the generator k*g
            let qkg = p.qtable.value(&[k]);
            let alpha_k = balanced(
                i64::try_from((qkg * rat(n as i64)).numer()).unwrap() as i128,
                n,
            );
            assert_eq!(aut_orbit_minv(n, alpha_k), aut_orbit_minv(n, alpha));
        }
    }

    #[test]
    fn fingerprint_cases() {
        let p = trefoil_pipeline();
        let f = orbit_fingerprint(&p.qtable);
        assert_eq!(f.q_values, vec!["0", "2/3", "2/3"]);
        let neg = f.negated();
        assert_eq!(neg.q_values, vec!["0", "1/3", "1/3"]);

        // Literal (Z/3)^2 table with q(x, y) = x*y/3.
        let mut values = Vec::new();
        for x in 0..3i64 {
            for y in 0..3i64 {
                values.push(mod1(&frac(x * y, 3)));
            }
        }
        let q33 = QTable {
            factors: vec![3, 3],
            values,
        };
        check_quadraticity(&q33).unwrap();
        let f = orbit_fingerprint(&q33);
        assert_eq!(
            f.q_values,
            vec!["0", "0", "0", "0", "0", "1/3", "1/3", "2/3", "2/3"]
        );

        let trivial = QTable {
            factors: vec![],
            values: vec![rat(0)],
        };
        assert_eq!(orbit_fingerprint(&trivial).q_values, vec!["0"]);
    }

    #[test]
    fn gauss_sum_cases() {
        let p = trefoil_pipeline();
        let g = gauss_sum(&p.qtable);
        assert!((g.mag2 - 3.0).abs() < 1e-9);
        assert!((g.phase_quarter_pi + 2.0).abs() < 1e-9);
        // S = -i sqrt(3)
        assert!(g.s_norm_re.abs() < 1e-9);
        assert!((g.s_norm_im + 3f64.sqrt() / 3.0).abs() < 1e-9);

        let trivial = QTable {
            factors: vec![],
            values: vec![rat(0)],
        };
        let g = gauss_sum(&trivial);
        assert!((g.mag2 - 1.0).abs() < 1e-12);
        assert!(g.phase_quarter_pi.abs() < 1e-12);

        // cyclic order 5 with alpha = 1: the classical quadratic sum sqrt(5)
        let q5 = QTable {
            factors: vec![5],
            values: (0..5i64).map(|c| mod1(&frac(c * c, 5))).collect(),
        };
        let g = gauss_sum(&q5);
        assert!((g.mag2 - 5.0).abs() < 1e-9);
        assert!(g.phase_quarter_pi.abs() < 1e-9);
    }

    #[test]
    fn figure_eight_braid_report() {
        let b = BraidWord::new(3, vec![1, -2, 1, -2]).unwrap();
        let r = full_report_braid(&b, &PipelineOptions::default()).unwrap();
        assert_eq!(r.torsion, vec![5]);
        assert_eq!(r.minv, Some(vec![-1, 1]));
        assert_eq!(r.verdict, Verdict::Undetected);
        assert!((r.gauss.phase_quarter_pi).abs() < 1e-9);
    }

    #[test]
    fn trefoil_braid_matches_polyline_fixture() {
        let b = BraidWord::new(2, vec![1, 1, 1]).unwrap();
        let from_braid = full_report_braid(&b, &PipelineOptions::default()).unwrap();
        let from_polyline = trefoil_pipeline().report;
        assert!(from_braid.equivalent(&from_polyline));
        assert_eq!(from_braid.minv, Some(vec![-1]));
    }

    #[test]
    fn unknot_report_is_trivial() {
        let b = BraidWord::new(1, vec![]).unwrap();
        let r = full_report_braid(&b, &PipelineOptions::default()).unwrap();
        assert_eq!(r.torsion, Vec::<u64>::new());
        assert_eq!(r.minv, Some(vec![0]));
        assert_eq!(r.verdict, Verdict::Trivial);
    }

    #[test]
    fn mirror_trefoil_negates_table() {
        let mut spec = crate::diagram::tests::trefoil_spec();
        for o in spec.over.iter_mut() {
            *o = match o {
                OverChoice::First => OverChoice::Second,
                OverChoice::Second => OverChoice::First,
            };
        }
        let d = parse_diagram(&spec).unwrap();
        let r = full_report(d, &PipelineOptions::default()).unwrap();
        assert_eq!(r.minv, Some(vec![1]));
        assert_eq!(r.fingerprint.q_values, vec!["0", "1/3", "1/3"]);
        let base = trefoil_pipeline().report;
        assert_eq!(r.fingerprint, base.fingerprint.negated());
    }

    #[test]
    fn offset_shifts_change_phi_not_qtable() {
        let base = trefoil_pipeline();
        for seed in [1u64, 2, 3] {
            let spec = crate::diagram::tests::trefoil_spec();
            let d = parse_diagram(&spec).unwrap();
            let opts = PipelineOptions {
                entry_offset_seed: Some(seed),
                ..Default::default()
            };
            let p = run_pipeline(d, &opts).unwrap();
            assert_eq!(p.qtable, base.qtable);
            assert!(p.report.equivalent(&base.report));
        }
    }

    #[test]
    fn schedule_offset_does_not_change_report() {
        let base = trefoil_pipeline();
        for offset in 1..4 {
            let spec = crate::diagram::tests::trefoil_spec();
            let d = parse_diagram(&spec).unwrap();
            let opts = PipelineOptions {
                schedule_offset: offset,
                ..Default::default()
            };
            let p = run_pipeline(d, &opts).unwrap();
            assert!(p.report.equivalent(&base.report));
        }
    }

    #[test]
    fn report_text_is_stable() {
        let r = trefoil_pipeline().report;
        let text = r.to_text();
        assert!(text.starts_with("torsion: [3]\nalpha: -1\nminv: [-1]\n"));
        assert!(text.contains("verdict: chiral-conjectural"));
    }

    #[test]
    fn report_json_round_trip() {
        let r = trefoil_pipeline().report;
        let json = serde_json::to_string_pretty(&r).unwrap();
        let back: InvariantReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
