//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

mod common;

use std::fs;
use std::path::PathBuf;

use handlecalc::ddc::parse_ddc;
use handlecalc::engine::{fixtures_root, invariant, run_script, MoveScript, State, Trace};
use handlecalc::heegaard::{gluck_cobordism, homology_5manifold, one_surgery, parse_hgd, FiveKind, HeegaardDiagram};
use handlecalc::invariants::{euler_of, smith_normal_form, IntMatrix};
use handlecalc::kirby::{apply_kirby, KirbyMove};
use handlecalc::Diagram;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn path(name: &str) -> PathBuf {
    fixtures_root().join(name)
}

fn read(name: &str) -> Result<String, String> {
    fs::read_to_string(path(name)).map_err(|e| format!("{name}: {e}"))
}

fn ddc(name: &str) -> Result<Diagram, String> {
    parse_ddc(&read(name)?).map_err(|e| format!("{name}: {e}"))
}

fn hgd(name: &str) -> Result<HeegaardDiagram, String> {
    parse_hgd(&read(name)?).map_err(|e| format!("{name}: {e}"))
}

fn script(name: &str) -> Result<Trace, String> {
    let ms = MoveScript::parse(&read(name)?).map_err(|e| format!("{name}: {e}"))?;
    let t = run_script(&ms, None, &fixtures_root()).map_err(|f| format!("{name}: {f}"))?;
    if let Some(e) = t.expectations.iter().find(|e| !e.passed) {
        return Err(format!("{name}: {e}"));
    }
    if let Some(d) = t.drift.first() {
        return Err(format!("{name}: drift of {} at step {} ({} -> {})", d.key, d.step, d.before, d.after));
    }
    Ok(t)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn slide_split() -> Check {
    let d = ddc("split_pm1.ddc")?;
    let m = KirbyMove::parse("slide22 i=B j=A band=(from=B.^ to=A.^ orient=+ core=( ))").map_err(|e| e.to_string())?;
    let out = apply_kirby(&d, &m).map_err(|e| e.to_string())?;
    let mut want = ddc("hopf_10.ddc")?;
    want.name = out.name.clone();
    ensure(out.canonical().to_text() == want.canonical().to_text(), format!("got\n{}", out.canonical().to_text()))?;
    Ok("framings (1,0), one clasp".into())
}

fn mazur() -> Check {
    let t = script("mazur_b5.kms")?;
    let last = t.final_state().unwrap_or_default();
    let st = State::parse(last).map_err(|e| e.to_string())?;
    ensure(st.diagram().is_empty(), format!("final state not empty:\n{last}"))?;
    let rec = invariant(&st, "recognize", false).map_err(|e| e.to_string())?;
    ensure(rec == "EmptyS4orB5", format!("recognize = {rec}"))?;
    Ok(format!("{} steps, recognize={rec}, no drift", t.entries.len()))
}

fn wu() -> Check {
    let s = State::Heegaard(hgd("wu.hgd")?);
    let get = |k: &str| invariant(&s, k, false).map_err(|e| e.to_string());
    let (h1, h2, chi) = (get("h1")?, get("h2")?, get("chi")?);
    ensure(h1 == "0" && h2 == "Z/2" && chi == "0", format!("h1={h1} h2={h2} chi={chi}"))?;
    Ok(format!("H1={h1} H2={h2} chi={chi}"))
}

fn cobordism() -> Check {
    let a = script("cobordism_alpha.kms")?;
    let b = script("cobordism_beta.kms")?;
    let budget_ok = a.entries.iter().any(|e| e.directive.contains("simplify budget=500"));
    ensure(budget_ok, "alpha script does not simplify within budget 500")?;
    let keys: Vec<String> = b.expectations.iter().map(|e| format!("{}={}", e.key, e.actual)).collect();
    ensure(b.expectations.iter().any(|e| e.key == "surj:A5"), "beta script does not count A5 surjections")?;
    ensure(b.expectations.iter().any(|e| e.key == "pi1ab"), "beta script does not check the abelianization")?;
    Ok(format!("alpha empty; beta {}", keys.join(" ")))
}

fn gluck() -> Check {
    let got = gluck_cobordism(&ddc("empty.ddc")?, &ddc("spun_trefoil.ddc")?).map_err(|e| e.to_string())?;
    ensure(got.same_as(&hgd("gluck_spun_trefoil.hgd")?), format!("compiled\n{}", got.canonical()))?;
    script("gluck_alpha.kms")?;
    let b = script("gluck_beta.kms")?;
    Ok(format!("compiler matches fixture; alpha and beta ({} steps) reach empty", b.entries.len()))
}

fn one_surgery_fixture() -> Check {
    let frag = read("gamma2.frag")?;
    let got = one_surgery(&ddc("s1xb3.ddc")?, &frag, 0).map_err(|e| e.to_string())?;
    let want = ddc("one_surgery_gamma2.ddc")?.canonical().to_text();
    let got = got.canonical().to_text();
    ensure(got == want, format!("got\n{got}"))?;
    Ok(format!("{} bytes identical", got.len()))
}

fn fuzz() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut moves = 0;
    for case in 0..1000 {
        let d0 = common::random_kirby(&mut rng, 4, 8);
        let want = common::kirby_invariants(&d0);
        let mut d = d0.clone();
        for _ in 0..rng.gen_range(1..=8) {
            let Some(m) = common::random_preserving_move(&mut rng, &d) else { continue };
            let Ok(next) = apply_kirby(&d, &m) else { continue };
            if !next.is_valid() {
                return Err(format!("case {case}: `{m}` gave an invalid code: {:?}", next.validate()));
            }
            let got = common::kirby_invariants(&next);
            if got != want {
                return Err(format!("case {case}: `{m}` changed {want:?} to {got:?}\n{}", d.canonical().to_text()));
            }
            d = next;
            moves += 1;
        }
    }
    Ok(format!("1000 diagrams, {moves} moves"))
}

/// Determinant by cofactor expansion.
fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n).flat_map(|last| subsets(last, k - 1).into_iter().map(move |mut s| {
        s.push(last);
        s
    })).collect()
}

/// gcd of all k×k minors, for k = 1..=min(rows, cols).
fn determinant_divisors(a: &[Vec<i64>]) -> Vec<i64> {
    let (r, c) = (a.len(), a[0].len());
    (1..=r.min(c))
        .map(|k| {
            let mut g = 0;
            for rows in subsets(r, k) {
                for cols in subsets(c, k) {
                    let m: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|&j| a[i][j]).collect()).collect();
                    g = gcd(g, det(&m));
                }
            }
            g
        })
        .collect()
}

fn snf_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for case in 0..10_000 {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let a = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&a);
        let fail = |why: &str| Err(format!("case {case} {rows:?}: {why}, got {:?}", s.d));
        if s.left.mul(&a).mul(&s.right) != s.diagonal() {
            return fail("left·A·right is not the diagonal");
        }
        if s.left.det().abs() != 1 || s.right.det().abs() != 1 {
            return fail("transforms are not unimodular");
        }
        if s.d.iter().any(|&x| x < 0) || s.d.windows(2).any(|w| if w[0] == 0 { w[1] != 0 } else { w[1] % w[0] != 0 }) {
            return fail("diagonal is not a divisor chain");
        }
        let mut prod = 1;
        for (k, dk) in determinant_divisors(&rows).into_iter().enumerate() {
            prod *= s.d[k];
            if prod != dk {
                return fail(&format!("product of the first {} factors is not d_{} = {dk}", k + 1, k + 1));
            }
        }
    }
    Ok("10000 matrices up to 4x4".into())
}

fn closed_euler() -> Check {
    let mut names: Vec<String> = fs::read_dir(fixtures_root())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.ends_with(".hgd"))
        .collect();
    names.sort();
    let mut seen = Vec::new();
    for n in names {
        let h = hgd(&n)?;
        if h.class != Some(FiveKind::Closed) {
            continue;
        }
        let k = h.asserted_k.ok_or(format!("{n}: no asserted_k"))? as i64;
        let r = h.asserted_r.ok_or(format!("{n}: no asserted_r"))? as i64;
        let a = h.sphere_count(handlecalc::ddc::Side::Alpha) as i64;
        let b = h.sphere_count(handlecalc::ddc::Side::Beta) as i64;
        let chi = 1 - k + a - b + r - 1;
        ensure(chi == 0, format!("{n}: 1-k+|α|-|β|+r-1 = {chi}"))?;
        let groups = homology_5manifold(&h, FiveKind::Closed, None).map_err(|e| format!("{n}: {e}"))?;
        ensure(euler_of(&groups) == 0, format!("{n}: homology gives chi = {}", euler_of(&groups)))?;
        seen.push(n);
    }
    ensure(!seen.is_empty(), "no closed fixtures")?;
    Ok(seen.join(" "))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("slide-split-to-hopf", slide_split),
        ("mazur-script-empty", mazur),
        ("wu-homology", wu),
        ("cobordism-sides", cobordism),
        ("gluck-spun-trefoil", gluck),
        ("one-surgery-fixture", one_surgery_fixture),
        ("invariance-fuzz", fuzz),
        ("snf-oracle", snf_oracle),
        ("closed-euler", closed_euler),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
