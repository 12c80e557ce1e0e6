use mader::instance::{Instance, Packing};
use mader::solver::solve;
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = Instance> {
    (1usize..12, 0usize..20, any::<u64>()).prop_flat_map(|(n, extra, seed)| {
        (0..=n).prop_flat_map(move |k| {
            let lo = usize::from(k > 0);
            (lo..=k.max(lo)).prop_map(move |b| Instance::random(n, n - 1 + if n > 1 { extra } else { 0 }, k, b, seed).unwrap())
        })
    })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(inst in instance()) {
        let text = inst.serialize();
        let back = Instance::parse(&text).unwrap();
        prop_assert_eq!(back.serialize(), text);
        prop_assert_eq!(back.edges(), inst.edges());
        prop_assert_eq!(back.blocks(), inst.blocks());
    }

    #[test]
    fn packing_text_roundtrips(inst in instance()) {
        let packing = solve(&inst).unwrap().packing;
        prop_assert_eq!(Packing::from_text(&packing.to_text()).unwrap(), packing);
    }
}
