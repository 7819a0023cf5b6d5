//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfc_core::automata::{Alphabet, Dfa};
use sfc_core::covering::{
    is_separable, opt_finite, opt_group, saturate_finite, saturate_group, verify_complete, verify_opt,
    verify_pointed, reduce_cover_instance,
};
use sfc_core::ltl::{compare_sampled, parse_ltl};
use sfc_core::membership::sf_membership;
use sfc_core::monoid::{generate, syntactic_morphism, FiniteMonoid, Morphism};
use sfc_core::oracles::{
    amt_kernel, c_orbit, c_pairs, gr_kernel, group_kernel, mod_kernel, ClassSelector, FinitePrevariety, GroupClass,
};
use sfc_core::sd::{
    has_sync_delay, is_prefix_code, min_sync_delay, parse_sd, sync_delay_witness, validate_sd_expression, SdOutcome,
};
use sfc_core::semiring::{rho_alpha, Antichain, PowersetSemiring};
use sfc_core::Config;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err(e: sfc_core::Error) -> String {
    e.to_string()
}

fn member(sel: &ClassSelector, d: &Dfa) -> Result<bool, String> {
    Ok(sf_membership(sel, d, &Config::default()).map_err(err)?.answer)
}

fn criterion_1() -> Check {
    ensure!(member(&ClassSelector::St, &re("(ab)*"))?, "ST rejects (ab)*");
    ensure!(member(&ClassSelector::St, &re("(a+b)*a(a+b)*"))?, "ST rejects A*aA*");
    let even = unary("(aa)*");
    let v = sf_membership(&ClassSelector::St, &even, &Config::default()).map_err(err)?;
    ensure!(!v.answer, "ST accepts (aa)*");
    let x = v.witness.ok_or("no rejection witness")?;
    let m = syntactic_morphism(&even, 64).map_err(err)?.morphism;
    let m = m.monoid();
    let mut power = x;
    while m.mul(power, power) != power {
        power = m.mul(power, x);
    }
    ensure!(m.mul(power, x) != power, "witness {x} satisfies x^(ω+1) = x^ω");
    ensure!(member(&ClassSelector::Mod, &even)?, "MOD rejects (aa)*");
    ensure!(member(&ClassSelector::Mod, &re("(aa+bb)*"))?, "MOD rejects (aa+bb)*");
    let s3 = s3_identity_fiber();
    ensure!(!member(&ClassSelector::Amt, &s3)?, "AMT accepts the S3 identity fiber");
    ensure!(member(&ClassSelector::Gr, &s3)?, "GR rejects the S3 identity fiber");
    Ok("ST, MOD, AMT and GR verdicts match".into())
}

fn sign(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            inversions += usize::from(p[i] > p[j]);
        }
    }
    inversions % 2 == 0
}

fn criterion_2() -> Check {
    let cfg = Config::default();
    let even = syntactic_morphism(&unary("(aa)*"), 64).map_err(err)?.morphism;
    ensure!(mod_kernel(&even).map_err(err)?.kernel == vec![0], "MOD kernel of (aa)* is not {{1}}");

    let gens = vec![vec![1, 0, 2], vec![1, 2, 0]];
    let g = generate(vec![0, 1, 2], &gens, |p: &Vec<usize>, q: &Vec<usize>| p.iter().map(|&i| q[i]).collect(), 16, "s3")
        .map_err(err)?;
    let s3 = Morphism::new(ab(), g.monoid.clone(), g.generators.clone()).map_err(err)?;
    let groups = [
        s3.clone(),
        Morphism::new(ab(), FiniteMonoid::cyclic_group(3), vec![1, 2]).map_err(err)?,
        Morphism::new(ab(), FiniteMonoid::cyclic_group(2), vec![1, 1]).map_err(err)?,
        syntactic_morphism(&s3_identity_fiber(), 64).map_err(err)?.morphism,
    ];
    for m in &groups {
        ensure!(gr_kernel(m) == vec![m.identity()], "GR kernel of a group morphism is not {{1}}");
    }
    let u1 = Morphism::new(Alphabet::parse("a").unwrap(), FiniteMonoid::new(0, vec![vec![0, 1], vec![1, 1]]).unwrap(), vec![1])
        .map_err(err)?;
    ensure!(gr_kernel(&u1) == vec![0, 1], "GR kernel of {{1, z}} is not everything");

    let amt = amt_kernel(&s3, &cfg).map_err(err)?;
    let even_perms: Vec<usize> = (0..g.elements.len()).filter(|&i| sign(&g.elements[i])).collect();
    ensure!(amt == even_perms && amt.len() == 3, "AMT kernel of S3 is {amt:?}, expected A3 = {even_perms:?}");
    Ok("MOD {1}; GR {1} on 4 group morphisms and {1,z} on U1; AMT(S3) = A3".into())
}

fn criterion_3() -> Check {
    // M = {1, a, b, 0} with every product of non-identity elements equal to 0.
    let t = vec![vec![0, 1, 2, 3], vec![1, 3, 3, 3], vec![2, 3, 3, 3], vec![3, 3, 3, 3]];
    let alpha = Morphism::new(ab(), FiniteMonoid::new(0, t).unwrap(), vec![1, 2]).map_err(err)?;
    // Content morphism into (2^{a,b}, ∪).
    let u = (0..4).map(|x| (0..4).map(|y| x | y).collect()).collect();
    let at = FinitePrevariety::new(Morphism::new(ab(), FiniteMonoid::new(0, u).unwrap(), vec![1, 2]).map_err(err)?);
    let p = c_pairs(&at, &alpha).map_err(err)?;
    let (one_a, zero) = (1, 3);
    ensure!(p.contains(one_a, zero), "(a, 0) is not an AT-pair");
    ensure!(p.contains(zero, 2), "(0, b) is not an AT-pair");
    ensure!(!p.contains(one_a, 2), "(a, b) is an AT-pair");
    ensure!(c_orbit(&p, &alpha, zero).map_err(err)? == vec![zero], "orbit of 0 is not {{0}}");
    Ok("(a,0), (0,b) pairs; (a,b) not; orbit(0) = {0}".into())
}

fn expanded(s: &PowersetSemiring, x: &Antichain<u64>) -> Vec<u64> {
    x.expand(s, &s.elements())
}

fn criterion_4() -> Check {
    let cfg = Config::default();
    let (even, odd) = (unary("(aa)*"), unary("a(aa)*"));
    ensure!(!is_separable(&ClassSelector::St, &even, &odd, &cfg).map_err(err)?.answer, "ST separates parities");
    ensure!(is_separable(&ClassSelector::Mod, &even, &odd, &cfg).map_err(err)?.answer, "MOD fails to separate parities");
    let l = syntactic_morphism(&even, 64).map_err(err)?;
    let rho = rho_alpha(&l, 16).map_err(err)?;
    let s = &rho.semiring;
    // Element 0 is 1, element 1 is g: bitsets ∅ = 0, {1} = 1, {g} = 2, {1,g} = 3.
    let st = opt_finite(&Morphism::trivial(&rho.alphabet), &rho, &cfg).map_err(err)?;
    ensure!(expanded(s, &st) == vec![0, 1, 2, 3], "Opt_ST = {:?}", expanded(s, &st));
    let (md, _) = opt_group(GroupClass::Mod, &rho, &cfg).map_err(err)?;
    ensure!(expanded(s, &md) == vec![0, 1, 2], "Opt_MOD = {:?}", expanded(s, &md));
    Ok("separation verdicts and both optimal imprints exact".into())
}

fn criterion_5() -> Check {
    let cfg = Config::default();
    let corpus = corpus();
    ensure!(corpus.len() >= 200, "corpus has only {} languages", corpus.len());
    let mut accepted = Vec::new();
    for sel in [ClassSelector::St, ClassSelector::Mod, ClassSelector::Gr] {
        let mut count = 0;
        for d in corpus {
            let m = member(&sel, d)?;
            let s = is_separable(&sel, d, &d.complement(), &cfg).map_err(err)?.answer;
            ensure!(m == s, "{}: membership {m} but separability {s} for {:?}", sel.name(), d.table());
            count += usize::from(m);
        }
        accepted.push(format!("{} accepts {count}", sel.name()));
    }
    Ok(format!("{} languages, no disagreement; {}", corpus.len(), accepted.join(", ")))
}

const EXAMPLE_43: &str = "
    uconcat(capC(star(b, d=1), \"((a+b)(a+b))*\"),
      dunion(capC(star(a, d=1), \"((a+b)(a+b))*\"),
        uconcat(uconcat(uconcat(a, uconcat(a, capC(star(a, d=1), \"((a+b)(a+b))*\"))), b),
          uconcat(
            star(uconcat(uconcat(b, capC(star(b, d=1), \"((a+b)(a+b))*\")),
                         uconcat(uconcat(a, uconcat(a, capC(star(a, d=1), \"((a+b)(a+b))*\"))), b)), d=1),
            uconcat(uconcat(b, capC(star(b, d=1), \"((a+b)(a+b))*\")), capC(star(a, d=1), \"((a+b)(a+b))*\"))))))";

fn random_sd(rng: &mut ChaCha8Rng, depth: usize, class_langs: &[&str]) -> String {
    if depth == 0 || rng.gen_bool(0.25) {
        return ["a", "b", "ab", "empty"][rng.gen_range(0..4)].into();
    }
    match rng.gen_range(0..4) {
        0 => format!("star({}, d={})", random_sd(rng, depth - 1, class_langs), rng.gen_range(1..=3)),
        1 => format!("uconcat({}, {})", random_sd(rng, depth - 1, class_langs), random_sd(rng, depth - 1, class_langs)),
        2 => format!("dunion({}, {})", random_sd(rng, depth - 1, class_langs), random_sd(rng, depth - 1, class_langs)),
        _ => format!(
            "capC({}, \"{}\")",
            random_sd(rng, depth - 1, class_langs),
            class_langs[rng.gen_range(0..class_langs.len())]
        ),
    }
}

fn criterion_6() -> Check {
    ensure!(is_prefix_code(&re("a*b")).map_err(err)?, "a*b is not a prefix code");
    ensure!(!is_prefix_code(&re("a+aa")).map_err(err)?, "{{a, aa}} is a prefix code");
    let k = re("(aab)*ab");
    ensure!(has_sync_delay(&k, 2).map_err(err)? && !has_sync_delay(&k, 1).map_err(err)?, "(aab)*ab delay is not 2");
    ensure!(min_sync_delay(&k, 5).map_err(err)? == Some(2), "min delay of (aab)*ab is not 2");
    ensure!(has_sync_delay(&re("a*b"), 1).map_err(err)?, "a*b lacks delay 1");
    ensure!(min_sync_delay(&re("a+b"), 5).map_err(err)? == Some(1), "{{a, b}} lacks delay 1");
    ensure!(min_sync_delay(&re("aa"), 6).map_err(err)?.is_none(), "{{aa}} has a delay up to 6");

    let codes = random_prefix_codes(100, 7);
    for code in &codes {
        let k = Dfa::finite(&ab(), code);
        for d in 1..=2 {
            let reach = sync_delay_witness(&k, d).map_err(err)?;
            let within = reach.as_ref().is_some_and(|w| w.u.len() + w.v.len() + w.w.len() <= 8);
            let brute = sync_witness_bruteforce(code, d, 8);
            ensure!(within == brute.is_some(), "code {code:?}, d = {d}: reachability {reach:?}, enumeration {brute:?}");
            if let Some(w) = reach {
                let uv = [w.u.clone(), w.v.clone()].concat();
                ensure!(
                    in_power(code, &[uv.clone(), w.w.clone()].concat(), None)
                        && in_power(code, &w.v, Some(d))
                        && !in_power(code, &uv, None),
                    "invalid witness {w:?} for {code:?}"
                );
            }
        }
    }

    let cfg = Config::default();
    let mut validated = 0;
    let fixed = [
        (EXAMPLE_43, ClassSelector::Mod, Some("(aa+bb)*")),
        ("star(ab, d=1)", ClassSelector::St, Some("(ab)*")),
        ("star(uconcat(star(a, d=1), b), d=1)", ClassSelector::St, Some("(a*b)*")),
    ];
    for (text, sel, lang) in &fixed {
        let e = parse_sd(text, &ab()).map_err(err)?;
        let SdOutcome::Valid(d) = validate_sd_expression(&e, &ab(), sel, &cfg).map_err(err)? else {
            return Err(format!("{text} does not validate"));
        };
        if let Some(l) = lang {
            ensure!(d.equivalent(&re(l)).map_err(err)?, "{text} does not denote {l}");
        }
        ensure!(member(sel, &d)?, "membership rejects validated {text}");
        validated += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let classes: [(ClassSelector, &[&str]); 2] = [
        (ClassSelector::St, &["(a+b)*", "%"]),
        (ClassSelector::Mod, &["((a+b)(a+b))*", "(a+b)((a+b)(a+b))*", "((a+b)(a+b)(a+b))*", "(a+b)*"]),
    ];
    for (sel, langs) in &classes {
        for _ in 0..150 {
            let text = random_sd(&mut rng, 4, langs);
            let e = parse_sd(&text, &ab()).map_err(err)?;
            if let SdOutcome::Valid(d) = validate_sd_expression(&e, &ab(), sel, &cfg).map_err(err)? {
                ensure!(member(sel, &d)?, "membership rejects validated {text}");
                validated += 1;
            }
        }
    }
    Ok(format!("5 example verdicts; 100 codes × d ∈ {{1,2}} agree; {validated} validated expressions accepted"))
}

fn criterion_7() -> Check {
    let formulas = [
        ("X(a | max) & U((a -> X(b)) & (b -> X(a | max)), max)", "(ab)*"),
        ("F[((a+b)(a+b))*](max) & U(F[((a+b)(a+b))*(a+b)](max) -> ((a & X(a)) | (b & X(b))), max)", "(aa+bb)*"),
    ];
    for (f, l) in formulas {
        let phi = parse_ltl(f, &ab()).map_err(err)?;
        let bad = compare_sampled(&phi, &re(l), 8);
        ensure!(bad.is_empty(), "{f} disagrees with {l} on {} words", bad.len());
    }
    Ok("both formulas agree with their languages on all 511 words of length ≤ 8".into())
}

fn criterion_8() -> Check {
    let cfg = Config { amt_monoid_cap: 12, ..Config::default() };
    let (mut amt_checked, mut mod_checked) = (0, 0);
    for d in corpus() {
        let alpha = syntactic_morphism(d, 64).map_err(err)?.morphism;
        let size = alpha.monoid().size();
        let amt = amt_kernel(&alpha, &cfg).map_err(err)?;
        if size <= 8 {
            let brute = amt_kernel_bruteforce(&alpha, 12);
            ensure!(amt == brute, "AMT kernel {amt:?} but q ≤ 12 enumeration gives {brute:?} for {:?}", d.table());
            amt_checked += 1;
        }
        let mk = mod_kernel(&alpha).map_err(err)?;
        let idx = mk.index;
        let layers = length_layers(d, 4 * idx);
        ensure!(layers[idx] == layers[2 * idx], "α(A^d) ≠ α(A^2d) at d = {idx}");
        ensure!((1..idx).all(|e| layers[e] != layers[2 * e]), "stability index {idx} is not least");
        ensure!(layers[2 * idx] == layers[3 * idx] && layers[3 * idx] == layers[4 * idx], "layers not stable up to 4d");
        let mut with_id = layers[idx].clone();
        with_id.insert(layers[0].iter().next().unwrap().clone());
        ensure!(with_id.len() == mk.kernel.len(), "MOD kernel size differs from enumeration");
        mod_checked += 1;
        let gr = gr_kernel(&alpha);
        let md = group_kernel(GroupClass::Mod, &alpha, &cfg).map_err(err)?;
        ensure!(gr.iter().all(|x| amt.contains(x)), "GR kernel not inside AMT kernel");
        ensure!(amt.iter().all(|x| md.contains(x)), "AMT kernel not inside MOD kernel");
    }
    Ok(format!("AMT vs enumeration on {amt_checked}, MOD index on {mod_checked}, inclusions corpus-wide"))
}

fn criterion_9() -> Check {
    let cfg = Config::default();
    let mut outputs = 0;
    let mut instances = vec![(unary("(aa)*"), unary("a(aa)*")), (re("(ab)*"), re("(a+b)*a(a+b)*"))];
    instances.extend(corpus().iter().map(|d| (d.clone(), d.complement())));
    for (l0, l1) in &instances {
        let inst = reduce_cover_instance(l0, std::slice::from_ref(l1), &cfg).map_err(err)?;
        let rho = &inst.rho;
        let st = Morphism::trivial(l0.alphabet());
        let sat = saturate_finite(&st, rho, &cfg).map_err(err)?;
        ensure!(verify_pointed(&st, rho, &sat), "ST saturation not closed");
        ensure!(verify_opt(rho, &sat.projection(&rho.semiring)), "ST optimal imprint not closed");
        for g in [GroupClass::Mod, GroupClass::Gr] {
            let sat = saturate_group(g, rho, &cfg).map_err(err)?;
            ensure!(verify_complete(g, rho, &sat, &cfg).map_err(err)?, "{g:?} saturation not closed");
            let (opt, _) = opt_group(g, rho, &cfg).map_err(err)?;
            ensure!(verify_opt(rho, &opt), "{g:?} optimal imprint not closed");
            ensure!(sat.set.is_subset(&rho.semiring, &opt), "{g:?} saturation not inside Opt");
        }
        outputs += 5;
    }
    Ok(format!("{outputs} saturation outputs closed on {} instances", instances.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("membership goldens", criterion_1),
        ("kernel goldens", criterion_2),
        ("pairs and orbits golden", criterion_3),
        ("covering and separation goldens", criterion_4),
        ("membership vs separation on the corpus", criterion_5),
        ("prefix codes, delays and SD expressions", criterion_6),
        ("temporal formulas vs languages", criterion_7),
        ("kernel oracle cross-checks", criterion_8),
        ("post-hoc closure of saturations", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({why}) [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
