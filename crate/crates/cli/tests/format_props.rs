use holodyn_cli::config::parse_key_values;
use holodyn_cli::figures::{parse_manifest, sha256_hex};
use holodyn_cli::output::Raster;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(seed: u64) -> Config {
    Config {
        cases: 1000,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

proptest! {
    #![proptest_config(config(0x636c_6931))]

    #[test]
    fn key_values_round_trip(pairs in prop::collection::btree_map("[a-z][a-z0-9-]{0,8}", "[ -~]{0,12}", 0..8)) {
        let text: String = pairs.iter().map(|(k, v)| format!("{k}={v}\n")).collect();
        let parsed = parse_key_values(&text).unwrap();
        let want: Vec<(String, String)> = pairs.iter().map(|(k, v)| (k.clone(), v.trim().to_string())).collect();
        prop_assert_eq!(parsed, want);
    }

    #[test]
    fn manifest_round_trip(files in prop::collection::btree_map("[a-z-]{1,10}\\.(ppm|csv)", prop::collection::vec(any::<u8>(), 0..64), 0..6)) {
        let text: String = files.iter().map(|(f, b)| format!("{}  {f}\n", sha256_hex(b))).collect();
        let parsed = parse_manifest(&text).unwrap();
        prop_assert_eq!(parsed.len(), files.len());
        for (f, b) in &files {
            prop_assert_eq!(&parsed[f], &sha256_hex(b));
        }
    }

    #[test]
    fn png_and_ppm_carry_the_same_pixels(cols in 1usize..9, rows in 1usize..9, seed in any::<u8>()) {
        let mut r = Raster::filled(cols, rows, [seed, 0, 255 - seed]);
        r.set(cols - 1, rows - 1, [1, 2, 3]);
        let back = image::load_from_memory(&r.png().unwrap()).unwrap().to_rgb8();
        prop_assert_eq!(back.as_raw(), &r.rgb);
        let ppm = r.ppm();
        prop_assert_eq!(&ppm[ppm.len() - r.rgb.len()..], &r.rgb[..]);
    }
}
