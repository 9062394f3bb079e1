#![allow(clippy::excessive_precision)]

use kickrotor::analytic::{
    bessel_j, energy_after_kicks, energy_spread_averaged, kappa_q, IntensitySpread,
};
use kickrotor::csim::{run_classical, ClassicalEnsemble};
use kickrotor::qsim::{apply_kick, LadderState};
use kickrotor::units::ScaledParams;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// J_n(x) to 60 digits from an arbitrary-precision library.
const BESSEL: &[(u32, f64, f64)] = &[
    (0, 0.001, 0.999999750000015625),
    (1, 0.001, 0.00049999993750000260417),
    (2, 0.001, 1.2499998958333365885e-7),
    (3, 0.001, 2.0833332031250032552e-11),
    (5, 0.001, 2.6041665581597241598e-19),
    (8, 0.001, 9.6881197705680974997e-32),
    (0, 0.5, 0.93846980724081290423),
    (1, 0.5, 0.24226845767487388638),
    (2, 0.5, 0.030604023458682641307),
    (3, 0.5, 0.0025637299945872440754),
    (5, 0.5, 8.053627241357474086e-6),
    (8, 0.5, 3.758223154797609955e-10),
    (0, 1.7, 0.39798485944610949114),
    (1, 1.7, 0.5777652315290232198),
    (2, 1.7, 0.28173894235274135568),
    (3, 1.7, 0.085149926948015264153),
    (5, 1.7, 0.0032745981410678646065),
    (8, 1.7, 6.2348407605872922193e-6),
    (0, 4.0, -0.39714980986384737229),
    (1, 4.0, -0.066043328023549136143),
    (2, 4.0, 0.36412814585207280421),
    (3, 4.0, 0.43017147387562194036),
    (5, 4.0, 0.13208665604709827229),
    (8, 4.0, 0.0040286678208190037374),
    (0, 9.6, -0.20897871836887249197),
    (1, 9.6, 0.13952481174068555014),
    (2, 9.6, 0.23804638748151531492),
    (3, 9.6, -0.040338816956720835588),
    (5, 9.6, -0.17904297310950069538),
    (8, 9.6, 0.32426734657783233088),
    (0, 13.25, 0.21776567792104889975),
    (1, 13.25, -0.016121474234366946171),
    (2, 13.25, -0.22019910799416089162),
    (3, 13.25, -0.050353728178964643753),
    (5, 13.25, 0.16953707595990164119),
    (8, 13.25, -0.1761421172612791179),
    (0, 20.0, 0.16702466434058315473),
    (1, 20.0, 0.066833124175850045579),
    (2, 20.0, -0.16034135192299815017),
    (3, 20.0, -0.098901394560449675613),
    (5, 20.0, 0.15116976798239497461),
    (8, 20.0, -0.073868928840750341319),
    (0, 27.5, -0.00099222890506740516315),
    (1, 27.5, 0.15214189320465694153),
    (2, 27.5, 0.01205709386540609182),
    (3, 27.5, -0.15038813409696150999),
    (5, 27.5, 0.13733531943640813124),
    (8, 27.5, -0.14366359035849418447),
    (0, 35.0, -0.12684568275631256981),
    (1, 35.0, 0.04399094217962563997),
    (2, 35.0, 0.12935945088086260638),
    (3, 35.0, -0.029207004936098484955),
    (5, 35.0, -0.0015053072953907044842),
    (8, 35.0, -0.1149657514265660265),
    (0, 42.1, -0.10958046187658668418),
    (1, 42.1, -0.057096456884761113907),
    (2, 42.1, 0.10686804112196620371),
    (3, 42.1, 0.067250190007988306658),
    (5, 42.1, -0.085736402074888616795),
    (8, 42.1, -0.041116996705448302018),
    (0, 50.0, 0.055812327669251815005),
    (1, 50.0, -0.097511828125175137661),
    (2, 50.0, -0.059712800794258820511),
    (3, 50.0, 0.092734804061634432021),
    (5, 50.0, -0.081400247696569639644),
    (8, 50.0, 0.10405856317363927063),
    (0, -7.3, 0.28821694763501438437),
    (1, -7.3, -0.08257043049325788024),
    (2, -7.3, -0.26559491188343688293),
    (3, -7.3, 0.22810188905952466541),
    (5, -7.3, -0.31370617089730905317),
    (8, -7.3, 0.15525662077255554784),
];

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

#[test]
fn bessel_matches_high_precision_table() {
    for &(n, x, want) in BESSEL {
        let got = bessel_j(n, x).unwrap();
        assert!(
            (got - want).abs() <= 1e-12 * want.abs().max(1e-3),
            "J{n}({x}) = {got}, want {want}"
        );
    }
}

// Ascending series summed in long form, independent of the library's own.
fn series_oracle(n: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut sum = 0.0;
    for k in 0..60 {
        sum += term;
        term *= -half * half / ((k + 1) as f64 * (k + 1 + n) as f64);
    }
    sum
}

#[test]
fn bessel_agrees_with_series_for_small_arguments() {
    for n in 0..=8 {
        for i in 0..=40 {
            let x = 0.1 * i as f64;
            let (got, want) = (bessel_j(n, x).unwrap(), series_oracle(n, x));
            assert!((got - want).abs() < 1e-13, "J{n}({x}): {got} vs {want}");
        }
    }
}

#[test]
fn kappa_q_and_closed_forms_at_reference_point() {
    assert!(rel(kappa_q(4.8, 1.0), 4.602485170600348802624) < 1e-15);
    let frozen = [
        (3, 60.65253100103587275569),
        (4, 91.38646667620698594372),
        (5, 101.2735259744772001484),
    ];
    for (n, want) in frozen {
        let got = energy_after_kicks(n, 4.8, 1.0, 0.0).unwrap().value;
        assert!(rel(got, want) < 1e-13, "E{n}: {got} vs {want}");
    }
}

#[test]
fn single_kick_populations_follow_jacobi_anger() {
    let phi = 9.6;
    let mut s = LadderState::plane_wave(0, 0.0, 60).unwrap();
    apply_kick(&mut s, phi).unwrap();
    let mut checked = 0;
    for &(n, x, j) in BESSEL.iter().filter(|r| r.1 == phi) {
        let want = Complex64::new(0.0, -1.0).powu(n) * j;
        for m in [n as i64, -(n as i64)] {
            assert!((s.amplitude(m) - want).norm() < 1e-12, "m={m} x={x}");
        }
        checked += 1;
    }
    assert!(checked >= 5);
}

#[test]
fn spread_quadrature_matches_monte_carlo() {
    let spread = IntensitySpread::uniform(0.1, 51);
    let (n, phi, kbar) = (5, 5.7, 1.3);
    let quad = energy_spread_averaged(n, phi, kbar, 0.0, &spread)
        .unwrap()
        .value;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let samples = 1_000_000;
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        let p = phi * (1.0 + 0.1 * (2.0 * rng.gen::<f64>() - 1.0));
        let e = energy_after_kicks(n, p, kbar, 0.0).unwrap().value;
        s += e;
        s2 += e * e;
    }
    let m = samples as f64;
    let mean = s / m;
    let se = ((s2 / m - mean * mean) / m).sqrt();
    assert!(
        (quad - mean).abs() < 3.0 * se,
        "quadrature {quad} vs MC {mean} +/- {se}"
    );
}

#[test]
fn classical_first_kick_second_moment() {
    // rho = kappa sin(phi) after one kick from rest: E = 2 <rho^2> / kbar^2 = phi_d^2
    let params = ScaledParams::new(0.8, 4.8, 1).unwrap();
    let s = run_classical(&ClassicalEnsemble::new(200_000, 11), &params);
    let se = s.std_errors.as_ref().unwrap()[1];
    assert!(
        (s.energies[1] - 4.8 * 4.8).abs() < 3.0 * se,
        "{} +/- {se}",
        s.energies[1]
    );
}
