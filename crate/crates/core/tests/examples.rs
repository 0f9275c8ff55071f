//! Runs every example's `main` so they stay working.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                main().unwrap();
            }
        }
    };
}

example!(ahp_basics);
example!(worked_example);
example!(mine_rules);
example!(passive_learning);
example!(active_learning);
example!(robustness);
example!(measure_audit);
