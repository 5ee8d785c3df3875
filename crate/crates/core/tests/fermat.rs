use logjac::fermat::*;
use logjac::{Field, GaussRat, GaussianRationals};
use proptest::prelude::*;

const K: GaussianRationals = GaussianRationals;

fn g(re: i64, im: i64) -> GaussRat {
    GaussRat::from_ints(re, im)
}

fn worked_line() -> ConeLine {
    cone_line(g(1, 0), g(-1, 0), g(0, 0)).unwrap()
}

fn extra() -> Point {
    point(&[(0, 0), (1, 0), (1, 0), (0, 0), (0, 0)])
}

#[test]
fn default_report() {
    let report = default_example().unwrap();
    println!("{}", report.table());
    assert!(report.certificate);
    assert!(report.condition1 && report.condition2);
    assert_eq!(report.r_functional, "q02 - q03 - q12 + q13");
    assert_eq!(report.r_kernel_codim, 1);
    assert_eq!(report.p0, "[1:-1:i:-i:0]");
    assert_eq!(report.p1, "[1:-1:-i:i:0]");
    assert_eq!(report.conic_on_line, "3*lambda^2 + 3*mu^2");
    let printed = report.printed.unwrap();
    assert!(!printed.p1_matches_derived);
    assert!(!printed.p1_on_conic);
    assert_eq!(printed.form, "z0 + i*z3");
    assert!(printed.form_separates);
}

#[test]
fn symbolic_expansion_matches() {
    let s = symbolic_restriction();
    assert_eq!(s.matches(), [true; 6]);
}

#[test]
fn obstruction_on_generic_quadric() {
    let line = worked_line();
    let terms: Vec<_> = quadric_pairs().into_iter().enumerate().map(|(k, ij)| (ij, g(k as i64 * 7 - 40, k as i64 % 3))).collect();
    let q = Quadric::from_coeffs(&terms);
    let c = |i, j| q.coeff(i, j);
    let expected = K.add(&K.sub(&c(0, 2), &c(0, 3)), &K.sub(&c(1, 3), &c(1, 2)));
    assert_eq!(obstruction_r(&q, &line).unwrap(), expected);
    assert_eq!(restrict_quadric(&q, &line)[1], expected);
}

#[test]
fn ideal_quadrics_are_consistent() {
    // multiples of the partials 3 z_i^2 reduce to zero in R_2
    let line = worked_line();
    let base = Quadric::from_coeffs(&[((0, 2), g(2, 0)), ((1, 3), g(0, 5)), ((3, 4), g(-1, 0))]);
    let ideal = Quadric::from_coeffs(&[((0, 0), g(3, 0)), ((2, 2), g(-6, 1)), ((4, 4), g(1, 1))]);
    let q = base.add(&ideal);
    assert_eq!(obstruction_r(&q, &line).unwrap(), obstruction_r(&q.modulo_squares(), &line).unwrap());
    assert!(obstruction_r(&ideal, &line).unwrap().is_zero());
}

#[test]
fn residual_points_and_form() {
    let rc = residual_conic(&worked_line(), &extra()).unwrap();
    assert_eq!(rc.on_line, [g(3, 0), g(0, 0), g(3, 0)]);
    let p0 = point(&[(1, 0), (-1, 0), (0, 1), (0, -1), (0, 0)]);
    let p1 = point(&[(1, 0), (-1, 0), (0, -1), (0, 1), (0, 0)]);
    assert_eq!(rc.points, vec![p0.clone(), p1.clone()]);
    // conjugation swaps the two points
    let conj: Point = p0.iter().map(|x| x.conj()).collect();
    assert_eq!(conj, p1);
    let ell = point(&[(1, 0), (0, 0), (0, 0), (0, 1), (0, 0)]);
    assert!(form_separates(&ell, std::slice::from_ref(&p1), &p0));
    assert_eq!(evaluate_form(&ell, &p0), g(2, 0));
    let found = linear_form_search(std::slice::from_ref(&p1), &p0).unwrap();
    assert!(form_separates(&found, &[p1], &p0));
}

#[test]
fn linear_form_edge_cases() {
    let p = point(&[(1, 0), (2, 0), (0, 0), (0, 0), (0, 1)]);
    assert!(linear_form_search(std::slice::from_ref(&p), &p).is_none());
    let f = linear_form_search(&[], &p).unwrap();
    assert_eq!(f.iter().filter(|x| !x.is_zero()).count(), 1);
}

#[test]
fn plane_without_line_is_rejected() {
    let off = point(&[(0, 0), (0, 0), (1, 0), (1, 0), (0, 0)]);
    let err = residual_conic_in_plane([eckardt_point(), off, extra()]).unwrap_err();
    assert!(err.to_string().contains("not divisible by nu"));
    // an extra point on L does not span a plane
    assert!(residual_conic(&worked_line(), &eckardt_point()).is_err());
}

#[test]
fn wedge_is_basis_and_representative_invariant() {
    let line = worked_line();
    let rc = residual_conic(&line, &extra()).unwrap();
    let section = normal_kernel(&line).sections[0].clone();
    let w = wedge_check(&line, &section, &rc.points[0], &rc).unwrap();
    assert!(w.nonzero);

    // rescaled point
    let scaled: Point = rc.points[0].iter().map(|x| K.mul(x, &g(2, -3))).collect();
    assert!(wedge_check(&line, &section, &scaled, &rc).unwrap().nonzero);

    // change of basis of N scales the determinant by 1/det(M)
    let [n1, n2] = w.normal_basis.clone();
    let comb = |a: i64, b: i64, c: i64, d: i64| -> Point {
        n1.iter().zip(&n2).map(|(x, y)| K.add(&K.mul(&g(a, b), x), &K.mul(&g(c, d), y))).collect()
    };
    let basis = [comb(2, 0, 1, 1), comb(0, 1, 3, 0)];
    let det_m = K.sub(&K.mul(&g(2, 0), &g(3, 0)), &K.mul(&g(1, 1), &g(0, 1)));
    let d2 = wedge_determinant(&w.line_span, &basis, &section, &w.conic_tangent).unwrap();
    assert_eq!(K.mul(&d2, &det_m), w.determinant);

    // tangent representative shifted along T_pL
    let shifted: Point = w
        .conic_tangent
        .iter()
        .zip(&w.line_span[0])
        .zip(&w.line_span[1])
        .map(|((t, p), z)| K.add(t, &K.add(&K.mul(&g(5, 1), p), &K.mul(&g(-2, 0), z))))
        .collect();
    let d3 = wedge_determinant(&w.line_span, &w.normal_basis, &section, &shifted).unwrap();
    assert_eq!(d3, w.determinant);

    // zero section
    let zero = vec![K.zero(); 5];
    assert!(!wedge_check(&line, &zero, &rc.points[0], &rc).unwrap().nonzero);
}

#[test]
fn wedge_contract_errors() {
    let line = worked_line();
    let rc = residual_conic(&line, &extra()).unwrap();
    let section = normal_kernel(&line).sections[0].clone();
    assert!(wedge_check(&line, &section, &extra(), &rc).is_err());
    let on_line_not_conic = eckardt_point();
    assert!(wedge_check(&line, &section, &on_line_not_conic, &rc).is_err());
}

#[test]
fn certificate_fixtures() {
    let data = certificate_data(&worked_line(), &extra()).unwrap();
    let mut no_sections = data.clone();
    no_sections.normal.sections.clear();
    let r = certify(&no_sections).unwrap();
    assert!(r.condition1 && !r.condition2 && !r.certificate);

    let mut coincident = data;
    coincident.p1 = coincident.p0.clone();
    let r = certify(&coincident).unwrap();
    assert!(!r.condition1 && !r.certificate);
}

#[test]
fn report_is_deterministic() {
    let a = serde_json::to_string(&default_example().unwrap()).unwrap();
    let b = serde_json::to_string(&default_example().unwrap()).unwrap();
    assert_eq!(a, b);
}

fn gauss() -> impl Strategy<Value = GaussRat> {
    (-20i64..=20, -20i64..=20).prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0).prop_map(|(a, b)| g(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cone_lines_lie_on_x(s in gauss(), perm in 0usize..6) {
        let base = [s.clone(), K.neg(&s), K.zero()];
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let [i, j, k] = orders[perm];
        let line = cone_line(base[i].clone(), base[j].clone(), base[k].clone()).unwrap();
        prop_assert!(line.cubic_restriction().is_zero());
        prop_assert_eq!(gamma_image(&line).cokernel_dim(), 1);
    }

    #[test]
    fn obstruction_is_linear(a in gauss(), b in gauss(), i in 0usize..5, j in 0usize..5, k in 0usize..5, l in 0usize..5) {
        let line = worked_line();
        let q1 = Quadric::monomial(i.min(j), i.max(j));
        let q2 = Quadric::monomial(k.min(l), k.max(l));
        let lhs = obstruction_r(&q1.scale(&a).add(&q2.scale(&b)), &line).unwrap();
        let rhs = K.add(&K.mul(&a, &obstruction_r(&q1, &line).unwrap()), &K.mul(&b, &obstruction_r(&q2, &line).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }
}
