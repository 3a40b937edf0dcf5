use bellcert::bigmath::PrecReal;
use bellcert::combinat::bell_recurrence;
use bellcert::theorem::*;

#[test]
fn formula_holds_to_n25() {
    let reports = verify_theorem(25, 160).unwrap();
    assert_eq!(reports.len(), 25);
    for r in &reports {
        assert!(r.pass, "n = {}", r.n);
        assert!(r.residual <= r.error_budget);
    }
}

#[test]
fn budget_shrinks_with_precision() {
    for n in [3u32, 10, 20] {
        let bell = bell_recurrence(n).values[n as usize].clone();
        let budgets: Vec<PrecReal> = [96u32, 160, 224]
            .iter()
            .map(|&p| {
                let r = judge(n, &bell, theorem_rhs(n, p).unwrap(), p);
                assert!(r.pass && r.residual <= r.error_budget);
                r.error_budget
            })
            .collect();
        // each +64 bits should buy far more than 32 bits of budget
        for w in budgets.windows(2) {
            let gain = w[0].top().unwrap() - w[1].top().unwrap();
            assert!(gain >= 32, "n = {n}: gain {gain}");
        }
    }
}

#[test]
fn negative_controls_fail() {
    let flipped = verify_corrupted(5, 128, Corruption::FlipSign { k: 2 }).unwrap();
    assert!(flipped.iter().any(|r| !r.pass));
    // n = 1 has no k = 2 term, so it is untouched
    assert!(flipped[0].pass);
    let truncated = verify_corrupted(6, 128, Corruption::TruncateBelow { m: 3 }).unwrap();
    assert!(truncated.iter().filter(|r| r.n >= 3).all(|r| !r.pass));
}

#[test]
fn genfunc_route_and_polynomials() {
    assert!(alternating_genfunc_check(40));
    for n in 1..=12 {
        assert_eq!(faadibruno_poly(n).unwrap(), deriv_oracle_poly(n).unwrap());
    }
    assert!(faadibruno_poly(0).is_err());
    assert!(verify_theorem(0, 128).is_err());
}
