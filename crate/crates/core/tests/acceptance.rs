//! Acceptance criteria 1 to 10. Each test prints one `PASS`/`FAIL` line and then asserts it.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gitfankit::gitfan::verify::{
    verify_fk_bridge, verify_nu_equality, verify_star_subfan, verify_blow_up_criterion, verify_walls, DEFAULT_SEED,
    FK_BRIDGE_SAMPLES,
};
use gitfankit::gitfan::{center_pullback, cox_variables, git_fan, omega_star, verify_delta_subfan, wall_fan};
use gitfankit::grassmann::{
    brute_force_supports, delta_contains, enumerate_y_sets, is_y_set, num_pairs, wedge_support, weights,
    y_set_witness, TreeSpace,
};
use gitfankit::semilattice::{face_poset, ray_set_label};
use gitfankit::{Cone, Fan, Label, PairIdx, QVector, YSet};

fn verdict(id: &str, ok: bool, elapsed: Duration, budget: Duration, detail: String) {
    let within = elapsed <= budget;
    let status = if ok && within { "PASS" } else { "FAIL" };
    println!("criterion {id}: {status} ({detail}; {:.2?} of {:.0?})", elapsed, budget);
    assert!(ok, "criterion {id} failed: {detail}");
    assert!(within, "criterion {id} exceeded its time budget: {elapsed:.2?} > {budget:.0?}");
}

#[test]
fn criterion_01_y_set_oracle() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [2, 3] {
        let fast: BTreeSet<YSet> = enumerate_y_sets(n).unwrap().into_iter().collect();
        let slow = brute_force_supports(n).unwrap();
        ok &= fast == slow;
        detail.push(format!("n={n}: {} sets, oracle equal {}", fast.len(), fast == slow));
    }
    let small = start.elapsed();

    let start4 = Instant::now();
    let ysets = enumerate_y_sets(4).unwrap();
    let known: BTreeSet<YSet> = ysets.iter().copied().collect();
    let mut witnessed = 0;
    for i in &ysets {
        let w = y_set_witness(i).unwrap();
        if let Some(w) = w {
            let (u, v) = w.vectors();
            if wedge_support(&u, &v).unwrap() == *i {
                witnessed += 1;
            }
        }
    }
    ok &= witnessed == ysets.len();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut random_ok = 0;
    for _ in 0..10_000 {
        let u: Vec<i64> = (0..5).map(|_| rng.gen_range(-2..=2)).collect();
        let v: Vec<i64> = (0..5).map(|_| rng.gen_range(-2..=2)).collect();
        let s = wedge_support(&QVector::from_i64(&u), &QVector::from_i64(&v)).unwrap();
        if is_y_set(&s) && known.contains(&s) {
            random_ok += 1;
        }
    }
    ok &= random_ok == 10_000;
    detail.push(format!("n=4: {witnessed}/{} witnessed, {random_ok}/10000 random supports satisfy (*)", ysets.len()));
    let large = start4.elapsed();
    let in_budget = small <= Duration::from_secs(10) && large <= Duration::from_secs(60);
    detail.push(format!("n=2,3 in {small:.2?} of 10s, n=4 in {large:.2?} of 60s"));
    verdict("1", ok && in_budget, small + large, Duration::from_secs(70), detail.join("; "));
}

#[test]
fn criterion_02_git_fan_walls() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [3, 4, 5] {
        let g = git_fan(n).unwrap();
        let w = wall_fan(n).unwrap();
        let star = omega_star(n).unwrap();
        let inside = g.maximal_cones().iter().filter(|c| star.contains_cone(c)).count();
        ok &= g == w && verify_walls(n).unwrap().result;
        match n {
            3 => ok &= g.walls().len() == 3 && g.maximal_cones().len() == 4,
            4 => ok &= inside == 8 && g.maximal_cones().len() == 12,
            _ => {}
        }
        detail.push(format!(
            "n={n}: equal {}, {} chambers, {} walls, {inside} inside Ω*",
            g == w,
            g.maximal_cones().len(),
            g.walls().len()
        ));
    }
    verdict("2", ok, start.elapsed(), Duration::from_secs(120), detail.join("; "));
}

#[test]
fn criterion_03_star_subfan() {
    let start = Instant::now();
    let results: Vec<bool> = [3, 4, 5].iter().map(|&n| verify_star_subfan(n).unwrap().result).collect();
    verdict(
        "3",
        results.iter().all(|&r| r),
        start.elapsed(),
        Duration::from_secs(120),
        format!("n=3,4,5: {results:?}"),
    );
}

fn orthant_subdivided(rays: &[[i64; 3]]) -> Fan {
    let rays: Vec<QVector> = rays.iter().map(|r| QVector::from_i64(r)).collect();
    Fan::from_maximal(3, vec![Cone::orthant(3)]).unwrap().iterated_stellar(&rays).unwrap()
}

#[test]
fn criterion_04_blow_up_example() {
    let start = Instant::now();
    let (nu0, nu1, nu2) = ([1, 1, 1], [1, 1, 0], [0, 1, 1]);
    let s1 = orthant_subdivided(&[nu1, nu2]);
    let s2 = orthant_subdivided(&[nu2, nu1]);
    let s1a = orthant_subdivided(&[nu0, nu1, nu2]);
    let s2a = orthant_subdivided(&[nu0, nu2, nu1]);
    let l = face_poset(&Fan::from_maximal(3, vec![Cone::orthant(3)]).unwrap());
    let at = |rays: &[usize]| l.index_of(&Label::atom(ray_set_label(rays))).unwrap();
    // Rays of the orthant fan are sorted, so index 0 is e3, 1 is e2 and 2 is e1.
    let (c12, c23, top) = (at(&[1, 2]), at(&[0, 1]), at(&[0, 1, 2]));
    let closure = l.harmonious_closure(&[c12, c23]);
    let added: Vec<usize> = closure.iter().copied().filter(|x| ![c12, c23].contains(x)).collect();
    let ok = s1 != s2 && s1a == s2a && added == [top];
    verdict(
        "4",
        ok,
        start.elapsed(),
        Duration::from_secs(1),
        format!("Σ₁≠Σ₂ {}, Σ₁ₐ=Σ₂ₐ {}, closure adds {:?}", s1 != s2, s1a == s2a, added.iter().map(|&x| l.label(x).to_string()).collect::<Vec<_>>()),
    );
}

#[test]
fn criterion_05_stellar_blow_up_bridge() {
    let start = Instant::now();
    let r = verify_fk_bridge(DEFAULT_SEED, FK_BRIDGE_SAMPLES).unwrap();
    verdict("5", r.result, start.elapsed(), Duration::from_secs(60), format!("{}", r.certificates.last().unwrap()));
}

#[test]
fn criterion_06_criterion_soundness() {
    let start = Instant::now();
    let r = verify_blow_up_criterion().unwrap();
    let summary: Vec<String> = r
        .certificates
        .iter()
        .map(|c| format!("dim {}: {} instances, {} counterexamples", c["orthant_dim"], c["instances"], c["counterexamples"].as_array().map_or(0, |a| a.len())))
        .collect();
    verdict("6", r.result, start.elapsed(), Duration::from_secs(300), summary.join("; "));
}

#[test]
fn criterion_07_delta_subfan() {
    let start = Instant::now();
    let r3 = verify_delta_subfan(3).unwrap();
    let t3 = start.elapsed();
    let r4 = verify_delta_subfan(4).unwrap();
    let t4 = start.elapsed() - t3;
    verdict(
        "7",
        r3.result && r4.result && t3 <= Duration::from_secs(10),
        t3 + t4,
        Duration::from_secs(610),
        format!("n=3 {} in {t3:.2?}, n=4 {} in {t4:.2?}; n=4 {}", r3.result, r4.result, r4.certificates.last().unwrap()),
    );
}

#[test]
fn criterion_08_nu_well_defined() {
    let start = Instant::now();
    let r4 = verify_nu_equality(4).unwrap();
    let r5 = verify_nu_equality(5).unwrap();
    verdict(
        "8",
        r4.result && r5.result,
        start.elapsed(),
        Duration::from_secs(30),
        format!("n=4 {} ({} partitions), n=5 {} ({} partitions)", r4.result, r4.certificates.len() - 1, r5.result, r5.certificates.len() - 1),
    );
}

#[test]
fn criterion_09_center_fixture() {
    let start = Instant::now();
    let wd = weights(3).unwrap();
    let v = |i, j| wd.v(PairIdx { i, j }).clone();
    let sum: Vec<_> = (0..3).map(|k| &v(0, 2)[k] + &v(0, 3)[k] + 2 * &v(2, 3)[k]).collect();
    let decomposition = sum == v(0, 1);
    let ci = center_pullback(3, &[2, 3]).unwrap();
    let shown: Vec<String> = ci.pullback_generators.iter().map(|p| p.to_string()).collect();
    let extra: Vec<String> = ci.extra.iter().map(|p| p.to_string()).collect();
    let displayed = ["T2^2", "T3^2", "T2*S3 - T3*S2"];
    let vars = cox_variables(&wd);
    let mut exps: Vec<String> = ci
        .exponents
        .iter()
        .map(|e| {
            vars.iter().zip(e).filter(|(_, &k)| k > 0).map(|(p, k)| format!("{k}e{}{}", p.i, p.j)).collect::<Vec<_>>().join("+")
        })
        .collect();
    exps.sort();
    let ok = decomposition
        && ci.c == 2.into()
        && displayed.iter().all(|g| shown.contains(&g.to_string()))
        && extra == ["T2*T3"]
        && exps == ["1e02+1e03", "1e23", "2e02", "2e03"];
    verdict(
        "9",
        ok,
        start.elapsed(),
        Duration::from_secs(1),
        format!("v02+v03+2v23=v01 {decomposition}, c={}, exponents {exps:?}, pullback {shown:?}, surplus {extra:?}", ci.c),
    );
}

/// Literal form: the point test at the representative `Σ v_η` of `cone(v_η; η ∈ J)`.
#[test]
fn criterion_10_tropical_convention() {
    let start = Instant::now();
    let wd = weights(3).unwrap();
    let mut mismatches = Vec::new();
    for m in 0u64..(1u64 << num_pairs(3)) {
        let j = YSet::from_mask(3, m);
        let rep = wd.v_cone(&j).unwrap().relint_rep();
        let lhs = delta_contains(&wd, &QVector::from_ints(&rep)).unwrap();
        if lhs != is_y_set(&j.complement()) {
            mismatches.push(j.to_string());
        }
    }
    verdict(
        "10",
        mismatches.is_empty(),
        start.elapsed(),
        Duration::from_secs(30),
        format!("{} of 64 sets disagree at the representative point, e.g. {:?}", mismatches.len(), mismatches.iter().take(3).collect::<Vec<_>>()),
    );
}

/// Existence form: `relint cone(v_η; η ∈ J) ∩ Δ ≠ ∅`, decided exactly over the tree cones of `Δ`.
#[test]
fn criterion_10_existence_form() {
    let start = Instant::now();
    let wd = weights(3).unwrap();
    let ts = TreeSpace::new(&wd).unwrap();
    let mismatches = (0u64..(1u64 << num_pairs(3)))
        .map(|m| YSet::from_mask(3, m))
        .filter(|j| ts.meets_relint(&wd.v_cone(j).unwrap()).unwrap() != is_y_set(&j.complement()))
        .count();
    verdict(
        "10 (existence form)",
        mismatches == 0,
        start.elapsed(),
        Duration::from_secs(30),
        format!("{mismatches} of 64 sets disagree"),
    );
}
