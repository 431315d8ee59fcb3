//! Golden examples run by `cbfactor selftest`.

use std::error::Error;
use std::io::Write;

use crate::algebra::{Outcome, RPoly, RingR, SAlg};
use crate::cross_balance::{
    build_fl, cross_balance_run, lift_h, power_form_check, pullback_factor, refine, stall_hook, AuxProvider,
    CbOutcome, CrossConfig, GraphStep, RoundEvent, SmallDegreeOutcome,
};
use crate::driver::factor_driver;
use crate::field::{FieldCtx, FpElem};
use crate::oracle::{d_set_sequence, expected_g, expected_h, RootedInstance, SurveyMode};
use crate::poly::{interpolate_monic, perfect_power_decompose, split_part, squarefree_part, DensePoly};
use crate::splitter::{cz_random_split, endomorphism_split};
use crate::square_balance::{square_balance_test, SbOutcome};

type Check = fn() -> Result<bool, Box<dyn Error>>;

fn f7() -> FieldCtx {
    FieldCtx::new(7).expect("prime")
}

fn poly(ctx: FieldCtx, c: &[i64]) -> DensePoly {
    DensePoly::from_i64s(ctx, c)
}

fn roots(ctx: FieldCtx, r: &[u64]) -> DensePoly {
    DensePoly::from_roots(ctx, &r.iter().map(|&v| ctx.elem(v)).collect::<Vec<_>>())
}

fn ring(ctx: FieldCtx, r: &[u64]) -> Result<RingR, Box<dyn Error>> {
    Ok(RingR::new(roots(ctx, r))?)
}

fn inst(p: u64, r: &[u64]) -> Result<RootedInstance, Box<dyn Error>> {
    let ctx = FieldCtx::new(p)?;
    Ok(RootedInstance::new(ctx, r.iter().map(|&v| ctx.elem(v)).collect())?)
}

/// Element of R with value `images[i]` at root `i`.
fn by_values(ctx: FieldCtx, r: &[u64], images: &[u64]) -> Result<DensePoly, Box<dyn Error>> {
    let pts: Vec<(FpElem, FpElem)> = r.iter().zip(images).map(|(&a, &b)| (ctx.elem(a), ctx.elem(b))).collect();
    Ok(crate::poly::lagrange(ctx, &pts)?)
}

fn split_factor<T>(o: Outcome<T>) -> Option<Vec<u64>> {
    o.split().map(|c| c.factor().coeff_values())
}

fn field_params() -> Result<bool, Box<dyn Error>> {
    let ok = |p: u64, e: u32, w: u64, q0: u64, eta: u64| -> Result<bool, Box<dyn Error>> {
        let c = FieldCtx::new(p)?;
        Ok(c.e() == e && c.w() == w && c.q0() == q0 && c.eta().value() == eta)
    };
    Ok(ok(7, 1, 3, 3, 6)? && ok(13, 2, 3, 2, 8)? && ok(5, 2, 1, 2, 2)?)
}

fn field_qr() -> Result<bool, Box<dyn Error>> {
    let (c7, c13) = (f7(), FieldCtx::new(13)?);
    Ok(c7.is_qr(c7.elem(1))? && !c7.is_qr(c7.elem(3))? && c13.is_qr(c13.elem(12))?)
}

fn field_two_adic() -> Result<bool, Box<dyn Error>> {
    let c = FieldCtx::new(13)?;
    let s = |a| c.two_adic_split(c.elem(a)).map(|(u, v)| (u, v.value()));
    Ok(s(8)? == (1, 1) && s(1)? == (0, 1) && s(5)? == (3, 1))
}

fn field_sigma() -> Result<bool, Box<dyn Error>> {
    let (c7, c13) = (f7(), FieldCtx::new(13)?);
    Ok(c7.sigma(c7.elem(4))?.value() == 2 && c13.sigma(c13.elem(12))?.value() == 8 && c13.sigma(c13.elem(1))?.value() == 1)
}

fn poly_basics() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let g = poly(c, &[-1, 0, 1]).gcd(&poly(c, &[-1, 1]))?;
    let prod = roots(c, &[1, 2, 4]);
    let (q, r) = poly(c, &[-1, 0, 0, 1]).divrem(&poly(c, &[-1, 1]))?;
    Ok(g.coeff_values() == [6, 1] && prod.coeff_values() == [6, 0, 0, 1] && q.coeff_values() == [1, 1, 1] && r.is_zero())
}

fn poly_squarefree() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let a = squarefree_part(&roots(c, &[1, 1, 2]))?.coeff_values() == [2, 4, 1];
    let b = squarefree_part(&roots(c, &[1, 1, 1]))?.coeff_values() == [6, 1];
    let sf = roots(c, &[1, 2, 4]);
    Ok(a && b && squarefree_part(&sf)? == sf)
}

fn poly_perfect_power() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let cube = perfect_power_decompose(&roots(c, &[1, 1, 1]))?.map(|(g, d)| (g.coeff_values(), d));
    let plain = perfect_power_decompose(&roots(c, &[1, 2, 4]))?.map(|(g, d)| (g.coeff_values(), d));
    Ok(cube == Some((vec![6, 1], 3))
        && plain == Some((vec![6, 0, 0, 1], 1))
        && perfect_power_decompose(&roots(c, &[1, 1, 2]))?.is_none())
}

fn poly_split_part() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let vals = |f: DensePoly| split_part(&f).map(|(a, b)| (a.coeff_values(), b.coeff_values()));
    Ok(vals(poly(c, &[1, 0, 1]))? == (vec![1], vec![1, 0, 1])
        && vals(poly(c, &[-1, 0, 0, 1]))? == (vec![6, 0, 0, 1], vec![1])
        && vals(poly(c, &[0, 1, 0, 1]))? == (vec![0, 1], vec![1, 0, 1]))
}

fn poly_interpolate() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let pts = |v: &[(u64, u64)]| v.iter().map(|&(a, b)| (c.elem(a), c.elem(b))).collect::<Vec<_>>();
    let target = roots(c, &[1, 1, 2]);
    let three: Vec<_> = (0..3).map(|s| (c.elem(s), target.eval(c.elem(s)))).collect();
    Ok(interpolate_monic(c, &pts(&[(0, 5)]), 1)?.coeff_values() == [5, 1]
        && interpolate_monic(c, &pts(&[(0, 1), (1, 0)]), 2)?.coeff_values() == [1, 5, 1]
        && interpolate_monic(c, &three, 3)?.coeff_values() == [5, 5, 3, 1])
}

fn ring_invert() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let r = ring(c, &[1, 2, 4])?;
    let a = r.invert(&r.scalar(c.elem(3)))?.value().map(|v| v.coeff_values()) == Some(vec![5]);
    let b = r.invert(&r.x())?.value().map(|v| v.coeff_values()) == Some(vec![0, 0, 1]);
    let s = split_factor(r.invert(&poly(c, &[-1, 1]))?) == Some(vec![6, 1]);
    Ok(a && b && s)
}

fn ring_char_poly() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let r = ring(c, &[1, 2, 4])?;
    Ok(r.char_poly(&r.x())? == *r.modulus()
        && r.char_poly(&poly(c, &[0, 0, 1]))?.coeff_values() == [6, 0, 0, 1]
        && r.char_poly(&r.scalar(c.elem(5)))? == roots(c, &[5, 5, 5]))
}

fn salg_structure() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let s = SAlg::new(ring(c, &[1, 2, 4])?);
    let fp: Vec<Vec<u64>> = s.fprime().coeffs().iter().map(DensePoly::coeff_values).collect();
    let s2 = SAlg::new(RingR::new(poly(c, &[-1, 0, 1]))?);
    let fp2: Vec<Vec<u64>> = s2.fprime().coeffs().iter().map(DensePoly::coeff_values).collect();
    let r = s.ring();
    let back = r.rpoly_mul(&r.rpoly_linear(&r.x()), s.fprime());
    let a = s.sub(&s.x(), &s.y());
    let sq = s.mul(&a, &a);
    let expanded = s.add(&s.sub(&s.mul(&s.x(), &s.x()), &s.scale(&s.mul(&s.x(), &s.y()), c.elem(2))), &s.mul(&s.y(), &s.y()));
    Ok(fp == vec![vec![0, 0, 1], vec![0, 1], vec![1]]
        && fp2 == vec![vec![0, 1], vec![1]]
        && back == r.rpoly_from_scalar(r.modulus())
        && s.mul(&sq, &s.one()) == sq
        && sq == expanded)
}

fn salg_sigma() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let rs = [1u64, 2, 4];
    let s = SAlg::new(ring(c, &rs)?);
    let a = s.sub(&s.x(), &s.y());
    let sig = s.sigma(&s.mul(&a, &a));
    let mut ok = s.sigma(&s.one()) == s.one();
    for &i in &rs {
        for &j in &rs {
            if i != j {
                let d = c.sub(c.elem(i), c.elem(j));
                ok &= sig.at_pair(c.elem(i), c.elem(j)) == c.sigma(c.mul(d, d))?;
            }
        }
    }
    Ok(ok)
}

fn rpoly_gcd_examples() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let r = ring(c, &[1, 2])?;
    let y_x = r.rpoly_linear(&r.x());
    let other = r.rpoly_linear(&poly(c, &[3, -1]));
    let one = r.rpoly_gcd(&y_x, &other)?.value() == Some(RPoly::new(vec![r.one()]));
    let split = split_factor(r.rpoly_gcd(&y_x, &r.rpoly_linear(&r.one()))?) == Some(vec![6, 1]);
    let same = r.rpoly_gcd(&y_x, &y_x)?.value() == Some(y_x.clone());
    let composed = r.rpoly_compose_scalar(&y_x, &poly(c, &[0, 0, 1]));
    let lin2 = r.rpoly_linear(&r.scalar(c.elem(2)));
    let (q, rem) = r.rpoly_divrem_monic(&r.rpoly_mul(&y_x, &lin2), &y_x)?;
    Ok(one
        && split
        && same
        && r.rpoly_eval(&y_x, &r.x()).is_zero()
        && composed == RPoly::new(vec![r.neg(&r.x()), r.zero(), r.one()])
        && q == lin2
        && rem.is_zero())
}

fn sb_examples() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let a = match square_balance_test(&RingR::new(poly(c, &[-1, 0, 0, 1]))?)? {
        SbOutcome::Balanced { h, t } => {
            let r = ring(c, &[1, 2, 4])?;
            t == 1 && [(1, 2), (2, 4), (4, 1)].iter().all(|&(x, img)| {
                h.at_root_in(&r, c.elem(x)) == DensePoly::linear(c, c.elem(img))
            })
        }
        SbOutcome::Split(_) => false,
    };
    let b = matches!(square_balance_test(&RingR::new(poly(c, &[1, 4, 1, 1]))?)?,
        SbOutcome::Split(cert) if cert.factor().coeff_values() == [6, 2, 1]);
    let e = matches!(square_balance_test(&RingR::new(poly(c, &[-1, 0, 1]))?)?, SbOutcome::Split(_));
    Ok(a && b && e)
}

fn cb_build_fl() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let r = ring(c, &[1, 2, 4])?;
    Ok(build_fl(&r, &poly(c, &[0, 1]))? == *r.modulus()
        && build_fl(&r, &poly(c, &[0, 0, 1]))?.coeff_values() == [6, 0, 0, 1]
        && build_fl(&r, &poly(c, &[0, 0, 0, 1]))?.coeff_values() == [6, 3, 4, 1])
}

fn cb_power_form() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let r = ring(c, &[1, 2, 4])?;
    let pf = |fl: &DensePoly, p: &DensePoly| power_form_check(&r, p, fl);
    let a = pf(r.modulus(), &poly(c, &[0, 1]))?.value().map(|(g, d)| (g.coeff_values(), d)) == Some((vec![6, 0, 0, 1], 1));
    let a3 = pf(&roots(c, &[1, 1, 1]), &poly(c, &[0, 0, 0, 1]))?.value().map(|(g, d)| (g.coeff_values(), d))
        == Some((vec![6, 1], 3));
    let p_l = poly(c, &[2, 4, 1]);
    let fl = build_fl(&r, &p_l)?;
    let s = split_factor(pf(&fl, &p_l)?);
    let b = s == Some(vec![3, 1]) || s == Some(vec![2, 4, 1]);
    Ok(a && a3 && b)
}

fn cb_pullback_and_lift() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let r = ring(c, &[1, 2, 4])?;
    let sq = poly(c, &[0, 0, 1]);
    let a = pullback_factor(&poly(c, &[-4, 1]), &sq, r.modulus())?.factor().coeff_values() == [5, 1];
    let b = pullback_factor(&roots(c, &[1, 4]), &sq, r.modulus())?.factor().coeff_values() == [2, 4, 1];
    let h = RPoly::new(vec![r.x(), r.one()]);
    let id = lift_h(&h, &poly(c, &[0, 1]), &r) == h;
    let konst = RPoly::new(vec![r.scalar(c.elem(3))]);
    Ok(a && b && id && lift_h(&konst, &sq, &r) == konst)
}

fn cb_refine() -> Result<bool, Box<dyn Error>> {
    let i = inst(11, &[1, 3, 4, 5, 9])?;
    let r = i.ring()?;
    let c = *i.ctx();
    let aux = vec![poly(c, &[0, 1]), poly(c, &[0, 0, 1])];
    let g1 = expected_g(&i, 1, &aux, true)?;
    let h2 = expected_h(&i, 2, &aux)?;
    let (g2, changed) = match refine(&r, &g1, &h2, &aux[1], true)? {
        Outcome::Value(v) => v,
        Outcome::Split(_) => return Ok(false),
    };
    let map = [(1, 4), (3, 1), (4, 5), (5, 9), (9, 3)];
    let traced = map.iter().all(|&(x, img)| g2.at_root_in(&r, c.elem(x)) == DensePoly::linear(c, c.elem(img)));
    let same = refine(&r, &g1, &g1, &aux[0], true)?.value() == Some((g1.clone(), false));

    let i7 = inst(7, &[1, 2, 4])?;
    let r7 = i7.ring()?;
    let aux7 = vec![poly(*i7.ctx(), &[0, 1]), poly(*i7.ctx(), &[0, 0, 1])];
    let g71 = expected_g(&i7, 1, &aux7, true)?;
    let h72 = lift_h(&g71, &aux7[1], &r7);
    let disjoint = refine(&r7, &g71, &h72, &aux7[1], true)?.value().is_some_and(|(g, ch)| g == g71 && !ch);
    Ok(changed && g2.degree() == Some(1) && traced && same && disjoint)
}

fn cb_in_degree() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let rs = [1u64, 2, 4];
    let r = ring(c, &rs)?;
    let b0 = by_values(c, &rs, &[2, 1, 1])?;
    let g = r.rpoly_linear(&b0);
    let poly_ok = crate::cross_balance::in_degree_polynomial(&r, &g)?.coeff_values() == [5, 5, 3, 1];
    let split = split_factor(crate::cross_balance::in_degree_check(&r, &g)?) == Some(vec![2, 4, 1]);
    let g1 = r.rpoly_linear(&by_values(c, &rs, &[2, 4, 1])?);
    let unit = crate::cross_balance::in_degree_check(&r, &g1)?.value().is_some();
    let i = inst(11, &[1, 3, 4, 5, 9])?;
    let aux = vec![poly(*i.ctx(), &[0, 1])];
    let g11 = expected_g(&i, 1, &aux, true)?;
    let unit11 = crate::cross_balance::in_degree_check(&i.ring()?, &g11)?.value().is_some();
    Ok(poly_ok && split && unit && unit11)
}

fn cb_runs() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let a = matches!(
        cross_balance_run(&RingR::new(poly(c, &[1, 4, 1, 1]))?, CrossConfig::default(), stall_hook)?,
        CbOutcome::Split { ref trace, .. } if trace.len() == 1 && trace[0].event == RoundEvent::NotSquareBalanced
    );
    let out = cross_balance_run(&ring(c, &[1, 2, 4])?, CrossConfig::default(), stall_hook)?;
    let b = out.trace().len() == 1
        && out.trace()[0].graph == Some(GraphStep::Balanced { degree: 1 })
        && matches!(out.trace()[0].event, RoundEvent::SmallDegree { .. });
    let i = inst(11, &[1, 3, 4, 5, 9])?;
    let out = cross_balance_run(&i.ring()?, CrossConfig::default(), stall_hook)?;
    let t = out.trace();
    let d = t.len() == 2
        && t[0].graph == Some(GraphStep::Balanced { degree: 2 })
        && t[0].event == RoundEvent::Continue
        && t[1].graph == Some(GraphStep::Refined { degree: 1 })
        && matches!(t[1].event, RoundEvent::SmallDegree { .. });
    Ok(a && b && d)
}

fn splitter_orbit() -> Result<bool, Box<dyn Error>> {
    let c = FieldCtx::new(11)?;
    let rs = [1u64, 2, 3, 4, 5];
    let r = ring(c, &rs)?;
    let beta = by_values(c, &rs, &[2, 1, 4, 5, 3])?;
    let a = matches!(endomorphism_split(&r, &beta)?, SmallDegreeOutcome::Split(cert)
        if cert.factor().degree().is_some_and(|d| d > 0 && d < 5) && cert.factor().divides(r.modulus())?);
    let c7 = f7();
    let r7 = ring(c7, &[1, 2, 4])?;
    let b = endomorphism_split(&r7, &by_values(c7, &[1, 2, 4], &[2, 4, 1])?)? == SmallDegreeOutcome::Stalled(Some(3));
    let id = endomorphism_split(&r7, &r7.x()).is_err();
    Ok(a && b && id)
}

fn splitter_fallback() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let f = poly(c, &[-1, 0, 0, 1]);
    let a = cz_random_split(&f, 3)?;
    let stable = a == cz_random_split(&f, 3)? && a.factor().divides(&f)?;
    let q = cz_random_split(&poly(c, &[2, 4, 1]), 0)?;
    let mut parts = vec![q.factor().coeff_values(), q.cofactor().coeff_values()];
    parts.sort();
    Ok(stable && parts == vec![vec![5, 1], vec![6, 1]] && cz_random_split(&poly(c, &[1, 1]), 0).is_err())
}

fn driver_examples() -> Result<bool, Box<dyn Error>> {
    let c = f7();
    let lin = |f: &[i64], fb: bool| -> Result<(Vec<Vec<u64>>, Vec<u64>, bool), Box<dyn Error>> {
        let r = factor_driver(&poly(c, f), CrossConfig::default(), fb, 0)?;
        let l = r.linear_factors().iter().map(DensePoly::coeff_values).collect();
        Ok((l, r.remainder.coeff_values(), r.fallback_used))
    };
    Ok(lin(&[1, 4, 1, 1], false)? == (vec![vec![6, 1], vec![5, 1], vec![4, 1]], vec![1], false)
        && lin(&[-1, 0, 0, 1], true)? == (vec![vec![6, 1], vec![5, 1], vec![3, 1]], vec![1], true)
        && lin(&[1, 0, 1], false)? == (vec![], vec![1, 0, 1], false))
}

fn oracle_delta() -> Result<bool, Box<dyn Error>> {
    let sizes = |i: &RootedInstance| -> Vec<Vec<usize>> {
        let (d, _) = i.delta_sets(&poly(*i.ctx(), &[0, 1]));
        d.iter().map(|s| s.iter().copied().collect()).collect()
    };
    let a = sizes(&inst(7, &[1, 2, 4])?) == vec![vec![1], vec![2], vec![0]];
    let b = sizes(&inst(7, &[1, 2, 3])?) == vec![vec![1, 2], vec![2], vec![]];
    let c = sizes(&inst(11, &[1, 3, 4, 5, 9])?).iter().all(|s| s.len() == 2);
    Ok(a && b && c)
}

fn oracle_snapshots() -> Result<bool, Box<dyn Error>> {
    let run = |p: u64, r: &[u64]| -> Result<Vec<(Option<usize>, bool)>, Box<dyn Error>> {
        let i = inst(p, r)?;
        let aux = vec![poly(*i.ctx(), &[0, 1]), poly(*i.ctx(), &[0, 0, 1])];
        Ok(d_set_sequence(&i, &aux, true).iter().map(|s| (s.regularity, s.equals_previous)).collect())
    };
    Ok(run(7, &[1, 2, 4])? == vec![(Some(1), false), (Some(1), true)]
        && run(11, &[1, 3, 4, 5, 9])? == vec![(Some(2), false), (Some(1), false)])
}

fn oracle_expected_g() -> Result<bool, Box<dyn Error>> {
    let i = inst(7, &[1, 2, 4])?;
    let c = *i.ctx();
    let r = i.ring()?;
    let g = expected_g(&i, 1, &[poly(c, &[0, 1])], true)?;
    Ok([(1, 2), (2, 4), (4, 1)].iter().all(|&(x, img)| g.at_root_in(&r, c.elem(x)) == DensePoly::linear(c, c.elem(img))))
}

fn oracle_survey() -> Result<bool, Box<dyn Error>> {
    let s = |p: u64, n: usize| -> Result<(u64, u64), Box<dyn Error>> {
        let r = crate::oracle::survey_square_balanced(FieldCtx::new(p)?, n, SurveyMode::Exhaustive)?;
        Ok((r.balanced, r.total))
    };
    Ok(s(7, 3)? == (14, 35) && s(5, 3)? == (5, 10) && s(7, 2)? == (0, 21))
}

fn cli_codes() -> Result<bool, Box<dyn Error>> {
    let run = |a: &[&str]| super::run_captured(a);
    let (c1, out, _) = run(&["factor", "--modulus", "7", "--coeffs", "1,4,1,1"]);
    let v: serde_json::Value = serde_json::from_str(&out)?;
    let facs: Vec<serde_json::Value> = v["outcome"]["factors"].as_array().cloned().unwrap_or_default();
    let facs: Vec<Vec<u64>> = facs.iter().filter_map(|f| serde_json::from_value(f["factor"].clone()).ok()).collect();
    let (c2, out2, _) =
        run(&["factor", "--modulus", "7", "--coeffs", "6,0,0,1", "--allow-fallback", "false", "--aux", "power", "--k", "8"]);
    let v2: serde_json::Value = serde_json::from_str(&out2)?;
    let last = v2["trace"][0]["rounds"].as_array().and_then(|r| r.last().cloned()).unwrap_or_default();
    let (c3, _, _) = run(&["factor", "--modulus", "4", "--coeffs", "1,1"]);
    Ok(c1 == 0
        && facs == vec![vec![6, 1], vec![5, 1], vec![4, 1]]
        && c2 == 2
        && last["event"]["kind"] == "small_degree"
        && c3 == 3)
}

fn cli_tests_and_tools() -> Result<bool, Box<dyn Error>> {
    let run = |a: &[&str]| super::run_captured(a);
    let (_, sb1, _) = run(&["sb-test", "--modulus", "7", "--coeffs", "6,0,0,1", "--format", "text"]);
    let (_, sb2, _) = run(&["sb-test", "--modulus", "7", "--coeffs", "1,4,1,1", "--format", "text"]);
    let (_, cb, _) = run(&["cb-test", "--modulus", "11", "--roots", "1,3,4,5,9", "--aux", "power"]);
    let cb: serde_json::Value = serde_json::from_str(&cb)?;
    let (_, sv, _) = run(&["survey", "--p", "7", "--n", "3", "--mode", "exhaustive"]);
    let (oc, or, _) = run(&["oracle", "--modulus", "11", "--roots", "1,3,4,5,9", "--aux", "power", "--rounds", "2", "--check"]);
    Ok(sb1.starts_with("Balanced t=1")
        && sb2.trim() == "Split 6,2,1"
        && cb["trace"][0]["graph"]["degree"] == 2
        && cb["trace"][1]["graph"]["kind"] == "refined"
        && cb["trace"][1]["graph"]["degree"] == 1
        && sv.lines().nth(1) == Some("7,3,exhaustive,35,14,0.4")
        && oc == 0
        && or.contains("G2: 1-regular, changed"))
}

fn random_provider_runs() -> Result<bool, Box<dyn Error>> {
    let i = inst(11, &[1, 3, 4, 5, 9])?;
    let cfg = CrossConfig { provider: AuxProvider::SeededRandom { seed: 5 }, ..CrossConfig::default() };
    Ok(crate::oracle::check_engine(&i, &cfg)?.ok())
}

const CHECKS: &[(&str, Check)] = &[
    ("field parameters", field_params),
    ("quadratic residuosity", field_qr),
    ("two-adic split", field_two_adic),
    ("canonical square root", field_sigma),
    ("polynomial gcd and division", poly_basics),
    ("squarefree part", poly_squarefree),
    ("perfect power form", poly_perfect_power),
    ("split part", poly_split_part),
    ("monic interpolation", poly_interpolate),
    ("inversion in R", ring_invert),
    ("characteristic polynomial in R", ring_char_poly),
    ("structure of S", salg_structure),
    ("square root in S", salg_sigma),
    ("gcd over R", rpoly_gcd_examples),
    ("square-balance test", sb_examples),
    ("image polynomial", cb_build_fl),
    ("power form check", cb_power_form),
    ("pullback and lift", cb_pullback_and_lift),
    ("refinement", cb_refine),
    ("in-degree check", cb_in_degree),
    ("refinement loop traces", cb_runs),
    ("endomorphism orbit", splitter_orbit),
    ("seeded fallback splitter", splitter_fallback),
    ("factor driver", driver_examples),
    ("neighbourhood sets", oracle_delta),
    ("graph snapshots", oracle_snapshots),
    ("expected g", oracle_expected_g),
    ("survey counts", oracle_survey),
    ("factor command", cli_codes),
    ("test and tool commands", cli_tests_and_tools),
    ("engine agrees with oracle under random aux", random_provider_runs),
];

/// Runs every check, prints one line each and returns the exit code.
pub fn run(out: &mut dyn Write) -> i32 {
    let mut failed = 0;
    for (name, check) in CHECKS {
        let status = match check() {
            Ok(true) => "ok".to_string(),
            Ok(false) => {
                failed += 1;
                "FAIL".to_string()
            }
            Err(e) => {
                failed += 1;
                format!("FAIL ({e})")
            }
        };
        let _ = writeln!(out, "{status:<6} {name}");
    }
    let _ = writeln!(out, "{} of {} checks passed", CHECKS.len() - failed, CHECKS.len());
    if failed == 0 {
        super::exit::OK
    } else {
        super::exit::MISMATCH
    }
}
