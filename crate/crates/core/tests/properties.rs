mod props;

macro_rules! property {
    ($name:ident) => {
        #[test]
        fn $name() {
            let p = props::ALL.iter().find(|p| p.id == stringify!($name)).unwrap();
            if let Err(e) = (p.check)(p.cases) {
                panic!("{}: {e}", p.label);
            }
        }
    };
}

property!(ring_axioms);
property!(tabulated_agrees);
property!(series_remultiplication);
property!(composition_associativity);
property!(precision_soundness);
property!(conjugation_invariance);
property!(planted_conjugators);
property!(tangent_linearization);
property!(surd_field_axioms);
property!(serialization_round_trips);
property!(report_round_trip);
