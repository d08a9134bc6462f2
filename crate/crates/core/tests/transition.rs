use blockmap::closed_forms;
use blockmap::transition::{find_critical_u, offspring_law, singular_point, Regime, DEFAULT_ORDER};
use rug::{Float, Rational};

fn rel(a: &Float, b: f64) -> f64 {
    ((a.to_f64() - b) / b).abs()
}

#[test]
fn anchors_at_unit_weight() {
    let p = singular_point(2, &Rational::from(1), DEFAULT_ORDER).unwrap();
    assert!(rel(&p.rho, 1.0 / 12.0) < 1e-6);
    assert!(rel(&p.y, 1.0 / 3.0) < 1e-6);
    assert!(rel(&p.mean, 2.0 / 3.0) < 1e-6);
    assert_eq!(p.regime, Regime::Subcritical);

    let p = singular_point(4, &Rational::from(1), DEFAULT_ORDER).unwrap();
    assert!(rel(&p.rho, 1.0 / 8.0) < 1e-6);
    assert!(rel(&p.y, 1.0 / 4.0) < 1e-6);
    assert!(((1.0 - p.mean.to_f64()) - 5.0 / 9.0).abs() < 1e-6);

    let p = singular_point(8, &Rational::from(1), DEFAULT_ORDER).unwrap();
    assert!(rel(&p.rho, 27.0 / 256.0) < 1e-6);
    assert!(rel(&p.mean, 0.5) < 1e-6);
}

#[test]
fn rho_decreases_in_u() {
    for scheme in [2u8, 6, 8] {
        let uc = closed_forms::u_critical(scheme).unwrap();
        let grid = [(1, 4), (1, 2), (1, 1), (3, 2), (2, 1), (4, 1)];
        let rhos: Vec<f64> = grid
            .iter()
            .map(|&(n, d)| {
                let u = &uc * Rational::from((n, d));
                singular_point(scheme, &u, DEFAULT_ORDER).unwrap().rho.to_f64()
            })
            .collect();
        assert!(rhos.windows(2).all(|w| w[1] < w[0]), "scheme {scheme}: {rhos:?}");
    }
}

#[test]
fn regime_follows_the_critical_weight() {
    for scheme in 1..=8u8 {
        let uc = closed_forms::u_critical(scheme).unwrap();
        let below = singular_point(scheme, &Rational::from(&uc / 2u32), DEFAULT_ORDER).unwrap();
        let at = singular_point(scheme, &uc, DEFAULT_ORDER).unwrap();
        let above = singular_point(scheme, &Rational::from(&uc * 2u32), DEFAULT_ORDER).unwrap();
        assert_eq!(
            (below.regime, at.regime, above.regime),
            (Regime::Subcritical, Regime::Critical, Regime::Supercritical)
        );
    }
}

#[test]
fn supercritical_law_has_mean_one() {
    for scheme in [2u8, 4, 8] {
        let uc = closed_forms::u_critical(scheme).unwrap();
        let law = offspring_law(scheme, &Rational::from(&uc * 2u32), DEFAULT_ORDER).unwrap();
        assert!((law.mean() - 1.0).abs() < 1e-8, "scheme {scheme}: mean {}", law.mean());
    }
}

#[test]
fn law_sums_to_one_with_its_tail() {
    for scheme in 1..=8u8 {
        let law = offspring_law(scheme, &Rational::from(1), DEFAULT_ORDER).unwrap();
        let total: f64 = law.probabilities.iter().map(Float::to_f64).sum::<f64>() + law.modeled_tail_mass();
        assert!((total - 1.0).abs() < 1e-9, "scheme {scheme}: {total}");
        assert!(law.probabilities.iter().all(|p| !p.is_sign_negative() || p.is_zero()));
    }
}

#[test]
fn vanishing_weight_gives_leaves() {
    let law = offspring_law(2, &Rational::from((1, 1_000_000)), DEFAULT_ORDER).unwrap();
    assert!(law.probabilities[0].to_f64() > 1.0 - 1e-5);
}

#[test]
fn subcritical_offspring_tail_is_five_halves() {
    let law = offspring_law(2, &Rational::from(1), DEFAULT_ORDER).unwrap();
    let p = |k: usize| law.probabilities[2 * k].to_f64();
    let (k1, k2) = (200usize, 400usize);
    let exponent = -(p(k2) / p(k1)).ln() / (k2 as f64 / k1 as f64).ln();
    assert!((exponent - 2.5).abs() < 0.2, "exponent {exponent}");
}

#[test]
fn critical_offspring_tail_is_five_halves() {
    let law = offspring_law(2, &Rational::from((9, 5)), DEFAULT_ORDER).unwrap();
    let p = |k: usize| law.probabilities[2 * k].to_f64();
    let exponent = -(p(400) / p(200)).ln() / 2f64.ln();
    assert!((exponent - 2.5).abs() < 0.2, "exponent {exponent}");
}

#[test]
fn exponent_fit_reports_an_amplitude() {
    let fit = blockmap::transition::exponent_estimate(4, &Rational::from(1), 512).unwrap();
    assert!((fit.alpha - 2.5).abs() < 0.1);
    assert!(fit.amplitude.is_finite() && fit.amplitude > 0.0);
}

#[test]
fn supercritical_offspring_tail_is_geometric() {
    let law = offspring_law(2, &Rational::from(5), DEFAULT_ORDER).unwrap();
    let p = |k: usize| law.probabilities[2 * k].to_f64();
    let (r1, r2) = (p(101) / p(100), p(201) / p(200));
    assert!(r1 < 0.99 && (r1 - r2).abs() < 0.01, "ratios {r1} {r2}");
}

#[test]
fn critical_weight_of_the_general_scheme() {
    let c = find_critical_u(2).unwrap();
    assert!((c.u_c.to_f64() - 1.8).abs() < 1e-6);
    assert_eq!(c.rational, Rational::from((9, 5)));
    assert!(c.residual.to_f64().abs() < 1e-8);
}

#[test]
fn unknown_scheme_and_bad_weight_are_rejected() {
    assert!(singular_point(9, &Rational::from(1), DEFAULT_ORDER).is_err());
    assert!(singular_point(2, &Rational::from(0), DEFAULT_ORDER).is_err());
    assert!(singular_point(2, &Rational::from(-1), DEFAULT_ORDER).is_err());
}
