use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rdiagram_core::homology::{homology_presentation, homology_rdiagram, validate_complex};
use rdiagram_core::oracle::{
    homology_invariants_direct, underlying_invariants_of_presentation,
    underlying_invariants_of_rdiagram,
};
use rdiagram_core::pullback::{pullback_group, separate};
use rdiagram_core::random::{
    random_complex, random_lattice_module, random_prime, random_separated_presentation,
};
use rdiagram_core::reduction::{reduce_combined, validate_rdiagram};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn separating_the_pullback_returns_the_diagram(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_prime(&mut r);
        let s = random_lattice_module(&mut r, p, 5, true);
        let d = separate(&s).unwrap().diagram;
        prop_assert!(d.separated());
        let back = separate(&pullback_group(&d)).unwrap().diagram;
        prop_assert_eq!(back.shape_invariants(), d.shape_invariants());
    }

    #[test]
    fn pullback_of_separation_has_the_same_group(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_prime(&mut r);
        let s = random_lattice_module(&mut r, p, 5, true);
        let d = separate(&s).unwrap().diagram;
        prop_assert_eq!(pullback_group(&d).group_invariants(), s.group_invariants());
    }

    #[test]
    fn reducing_an_rdiagram_again_changes_nothing(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_prime(&mut r);
        let pres = random_separated_presentation(&mut r, p, 5);
        let rd = reduce_combined(&pres).unwrap();
        let again = reduce_combined(&rd.to_presentation().unwrap()).unwrap();
        prop_assert_eq!(again.forms(), rd.forms());
        prop_assert_eq!(
            underlying_invariants_of_presentation(&pres),
            underlying_invariants_of_rdiagram(&again)
        );
    }

    #[test]
    fn three_routes_to_the_homology_group(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_prime(&mut r);
        let c = random_complex(&mut r, p, 3, 4);
        prop_assert!(validate_complex(&c).is_valid());
        for n in 0..c.terms() {
            let direct = homology_invariants_direct(&c, n);
            let hp = homology_presentation(&c, n).unwrap();
            prop_assert_eq!(&underlying_invariants_of_presentation(&hp.presentation), &direct);
            let h = homology_rdiagram(&c, n).unwrap();
            prop_assert!(validate_rdiagram(&h.rdiagram).all_pass());
            prop_assert_eq!(&underlying_invariants_of_rdiagram(&h.rdiagram), &direct);
        }
    }
}
