use morsepres::complex::presentation_complex;
use morsepres::matching::{critical_counts, spanning_matching};
use morsepres::morse::{collapse_matching, morse_presentation};
use morsepres::presentation::{parse_presentation, smith_normal_form, Move, Presentation};
use morsepres::simplify::{simplified, SimplifyConfig};
use morsepres::words::{Letter, Word};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word(gens: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, any::<bool>()), 1..=max_len)
        .prop_map(|ls| Word::from(ls.into_iter().map(|(g, inv)| if inv { Letter::neg(g) } else { Letter::pos(g) }).collect::<Vec<_>>()))
}

/// Two-generator presentations with non-empty, cyclically reduced relators.
fn presentation(max_rels: usize, max_len: usize) -> impl Strategy<Value = Presentation> {
    prop::collection::vec(word(2, max_len), 1..=max_rels).prop_filter_map("empty relator", |rs| {
        let rs: Vec<Word> = rs.iter().map(Word::cyclic_reduce).collect();
        if rs.iter().any(Word::is_empty) {
            return None;
        }
        Some(Presentation::new(vec!["x", "y"], rs).unwrap())
    })
}

fn det(m: &[Vec<i64>]) -> i128 {
    // Laplace expansion; matrices here are at most 3x3
    match m.len() {
        0 => 1,
        1 => m[0][0] as i128,
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] as i128 * det(&minor)
            })
            .sum(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_round_trip(p in presentation(3, 8)) {
        prop_assert_eq!(parse_presentation(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn words_form_a_group(a in word(3, 10), b in word(3, 10)) {
        prop_assert!(a.mul(&a.inverse()).is_empty());
        prop_assert_eq!(a.inverse().inverse(), a.clone());
        prop_assert_eq!(a.mul(&b).inverse(), b.inverse().mul(&a.inverse()));
        let c = a.cyclic_reduce();
        prop_assert!(c.is_cyclically_reduced());
        for k in 0..c.len() {
            let r = c.rotate(k).rotation_to(&c);
            prop_assert!(r.is_some());
            prop_assert_eq!(c.rotate(k).rotate(r.unwrap()), c.clone());
        }
    }

    #[test]
    fn snf_product_is_determinant(m in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 3)) {
        let d = smith_normal_form(&m).unwrap();
        let prod: i128 = d.iter().map(|&v| v as i128).product();
        let full_rank = d.len() == 3 && d.iter().all(|&v| v != 0);
        if full_rank {
            prop_assert_eq!(prod, det(&m).abs());
        } else {
            prop_assert_eq!(det(&m), 0);
        }
        for w in d.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
    }

    #[test]
    fn moves_preserve_invariants(p in presentation(3, 6), picks in prop::collection::vec((0usize..3, 0usize..3, 0usize..6, word(2, 4)), 1..8)) {
        let inv = p.abelian_invariants().unwrap();
        let mut q = p.clone();
        for (i, j, k, w) in picks {
            let m = q.num_relators();
            let (i, j) = (i % m, j % m);
            let mv = match k % 4 {
                0 => Move::InvertRelator(i),
                1 if i != j => Move::MultiplyRelator(i, j),
                2 => Move::ConjugateRelator(i, w),
                _ => Move::RotateRelator(i, k),
            };
            mv.apply(&mut q).unwrap();
        }
        prop_assert_eq!(q.abelian_invariants().unwrap(), inv);
    }

    #[test]
    fn simplify_log_replays(p in presentation(3, 7)) {
        let r = simplified(&p, &SimplifyConfig { log_moves: true, ..Default::default() });
        prop_assert_eq!(r.moves.replay(&p).unwrap(), r.result.clone());
        prop_assert!(r.result.total_length() <= p.total_length() || r.result.num_generators() < p.num_generators());
    }

    #[test]
    fn morse_counts_and_invariants(p in presentation(2, 6), seed in any::<u64>()) {
        let c = presentation_complex(&p).unwrap();
        let x = c.face_poset();
        let m = spanning_matching(&x, &mut ChaCha8Rng::seed_from_u64(seed));
        let crit = critical_counts(&x, &m);
        let q = morse_presentation(&p, &m).unwrap();
        prop_assert_eq!((q.num_generators(), q.num_relators()), (crit[1], crit[2]));
        prop_assert_eq!(q.abelian_invariants().unwrap(), p.abelian_invariants().unwrap());
        prop_assert_eq!(crit[0] as i64 - crit[1] as i64 + crit[2] as i64, c.euler_characteristic());
    }
}

#[test]
fn collapse_order_does_not_matter() {
    let p = parse_presentation("<x,y | x*y*x*y^-1*x^-1*y^-1, x^2*y^-3>").unwrap();
    let c = presentation_complex(&p).unwrap();
    let x = c.face_poset();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..10 {
        let m = spanning_matching(&x, &mut rng);
        let reference = collapse_matching(&c, &x, &m, None).unwrap().to_presentation().presentation;
        let mut order: Vec<(usize, usize)> = m.pairs_of_dim(&x, 1).collect();
        for _ in 0..100 {
            order.shuffle(&mut rng);
            let q = collapse_matching(&c, &x, &m, Some(&order)).unwrap().to_presentation().presentation;
            assert_eq!(q, reference);
        }
    }
}
