use std::collections::BTreeMap;

use proptest::prelude::*;

use jsjtree::ornament::{Ornament, Sign};
use jsjtree::{ExtNat, OrnamentUniverse, PosRational};

fn extnat() -> impl Strategy<Value = ExtNat> {
    prop_oneof![4 => (0u64..1 << 40).prop_map(ExtNat::Fin), 1 => Just(ExtNat::Inf)]
}

proptest! {
    #[test]
    fn monoid_laws(a in extnat(), b in extnat(), c in extnat()) {
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a + ExtNat::ZERO, a);
    }

    #[test]
    fn serde_round_trip(a in extnat()) {
        let s = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<ExtNat>(&s).unwrap(), a);
    }

    #[test]
    fn rational_cancellation(p in 1u64..10_000, q in 1u64..10_000) {
        let x = PosRational::new(p, q).unwrap();
        prop_assert_eq!(x * PosRational::new(q, p).unwrap(), PosRational::integer(1).unwrap());
        prop_assert_eq!(x.to_string().parse::<PosRational>().unwrap(), x);
    }
}

#[test]
fn examples() {
    assert_eq!(ExtNat::Fin(2) + ExtNat::Fin(3), ExtNat::Fin(5));
    assert_eq!(ExtNat::Fin(7) + ExtNat::Inf, ExtNat::Inf);
    assert_eq!(ExtNat::ZERO + ExtNat::ZERO, ExtNat::ZERO);
    assert_eq!(serde_json::to_string(&ExtNat::Inf).unwrap(), "\"inf\"");
}

#[test]
fn interning_ignores_insertion_order() {
    let mut u = OrnamentUniverse::new();
    let b = u.base(["cylindrical"]);
    let keys = [u.base(["x"]), u.base(["y"]), u.base(["z"])];
    let counts = [ExtNat::Fin(2), ExtNat::Inf, ExtNat::Fin(1)];
    let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let ids: Vec<_> = orders
        .iter()
        .map(|o| u.neighbor(b, o.iter().map(|&i| (keys[i], counts[i]))))
        .collect();
    assert!(ids.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(u.base(["rigid"]), u.base(["rigid"]));
}

#[test]
fn order_is_structural() {
    let mut u = OrnamentUniverse::new();
    let rigid = u.base(["rigid"]);
    let cyl = u.base(["cyl"]);
    assert!(u.cmp(cyl, rigid).is_lt());
    let nb = u.neighbor(cyl, []);
    assert!(u.cmp(cyl, nb).is_lt());

    // a second universe interning in the opposite order agrees
    let mut v = OrnamentUniverse::new();
    let nb2 = {
        let c = v.base(["cyl"]);
        v.neighbor(c, [])
    };
    let rigid2 = v.base(["rigid"]);
    assert_eq!(u.cmp(nb, rigid), v.cmp(nb2, rigid2));
}

#[test]
fn zero_counts_vanish_and_wrappers_nest() {
    let mut u = OrnamentUniverse::new();
    let b = u.base(["v"]);
    let x = u.base(["x"]);
    assert_eq!(u.neighbor(b, [(x, ExtNat::ZERO)]), u.neighbor(b, []));
    let s = u.signed(b, Sign::Pos);
    assert!(matches!(u.get(s), Ornament::Signed { sign: Sign::Pos, .. }));
    assert_eq!(u.initial(s), b);
    let mut seen = BTreeMap::new();
    for id in [b, x, s] {
        seen.insert(u.base_tags(id).to_vec(), id);
    }
    assert_eq!(seen.len(), 2);
}
