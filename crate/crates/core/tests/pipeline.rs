use cubic_brauer::brauer::{analyze, AnalysisReport, CheckKind, Outcome};
use cubic_brauer::input::parse_surface;
use cubic_brauer::lines::DEFAULT_PRECISION;
use proptest::prelude::*;

/// Joins `coefficient * monomial` terms, skipping zero coefficients.
fn polynomial(terms: &[(i64, &str)]) -> String {
    let mut out = String::new();
    for &(c, m) in terms.iter().filter(|(c, _)| *c != 0) {
        let sign = if c < 0 {
            "-"
        } else if out.is_empty() {
            ""
        } else {
            "+"
        };
        out.push_str(&format!("{sign}{}*{m}", c.abs()));
    }
    out
}

fn run(src: &str, p: u64) -> AnalysisReport {
    analyze(&parse_surface(src).unwrap(), p, DEFAULT_PRECISION).unwrap()
}

#[test]
fn cone_analysis_at_several_primes() {
    for p in [5u64, 7, 11, 13] {
        let r = run(&format!("x^3+y^3+z^3+{p}w^3"), p);
        assert_eq!(r.outcome, Outcome::Verdict, "p = {p}\n{}", r.to_text());
        assert_eq!(r.cohomology.as_ref().unwrap().h1_invariants, vec![3, 3]);
        assert!(r.verdicts_are_gated());
    }
}

#[test]
fn cone_with_vertex_off_the_coordinate_points() {
    // (x - y)^3 + z^3 + w^3 + 5 y^3: the reduction is a cone with vertex (1:1:0:0)
    let r = run("x^3-3x^2*y+3x*y^2-y^3+z^3+w^3+5y^3", 5);
    assert_eq!(r.outcome, Outcome::Verdict, "{}", r.to_text());
    let cone = r.cone.as_ref().unwrap();
    assert_eq!((cone.s, cone.a_unit), (1, true));
    assert_eq!(r.cohomology.as_ref().unwrap().h1_invariants, vec![3, 3]);
    assert!(r.verdicts_are_gated());
}

#[test]
fn trivial_brauer_group_when_the_section_has_no_rational_three_torsion() {
    // y^2 z = x^3 + x z^2 over F_7 has 8 points
    let r = run("y^2*z-x^3-x*z^2+7w^3", 7);
    assert_eq!(r.outcome, Outcome::Verdict, "{}", r.to_text());
    assert!(r.check("rational_three_torsion_trivial").unwrap().passed);
    assert!(r.verdict("trivial_brauer").is_some());
}

#[test]
fn text_and_json_agree_on_checks() {
    let r = run("x^3+y^3+z^3+5w^3", 5);
    let text = r.to_text();
    for c in &r.checks {
        let tag = if c.passed { "[pass]" } else { "[FAIL]" };
        assert!(text.contains(&format!("{tag} {}", c.id)), "{}", c.id);
    }
    let json: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["checks"].as_array().unwrap().len(), r.checks.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Whatever the surface, a verdict cites only passed checks, and a cone
    /// verdict requires every consistency check to pass.
    #[test]
    fn verdicts_are_gated(
        p in prop::sample::select(vec![5u64, 7, 11]),
        a in 1i64..5, b in 1i64..5, c in 1i64..5, d in 1i64..5,
        e in 1u32..4,
        mix in -3i64..4,
        extra in -3i64..4,
    ) {
        let pe = (p as i64).pow(e);
        let src = polynomial(&[
            (a, "x^3"), (b, "y^3"), (c, "z^3"), (mix, "x*y*z"),
            (d * pe, "w^3"), (extra * pe, "x*y*w"), (mix * pe, "z*w^2"),
        ]);
        let r = run(&src, p);
        prop_assert!(r.verdicts_are_gated());
        if r.outcome == Outcome::Verdict && r.lines.is_some() {
            prop_assert!(r.checks.iter().filter(|c| c.kind == CheckKind::Consistency).all(|c| c.passed));
            prop_assert_eq!(&r.cohomology.as_ref().unwrap().h1_invariants, &vec![3, 3]);
        }
        if r.outcome != Outcome::Verdict {
            prop_assert!(r.verdicts.is_empty());
        }
        let back: AnalysisReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }
}
