use cliffspec::battery::{Battery, BatteryConfig};

fn small(flip: bool, groups: Option<Vec<String>>) -> BatteryConfig {
    BatteryConfig {
        seed: 7,
        sizes: vec![(1, 1), (2, 2), (3, 1)],
        per_size: 3,
        bisectorial_per_size: 1,
        groups,
        flip_ds_sign: flip,
    }
}

#[test]
fn small_battery_passes() {
    let report = Battery::new(small(false, None)).unwrap().run();
    for g in &report.groups {
        assert!(g.passed, "{g:?}");
    }
    assert!(report.passed);
}

#[test]
fn flipped_orientation_is_caught() {
    let groups = Some(vec!["cauchy-normalization".to_string()]);
    let report = Battery::new(small(true, groups)).unwrap().run();
    assert_eq!(report.groups.len(), 1);
    assert!(!report.groups[0].passed);
    assert!(!report.passed);
}

#[test]
fn groups_do_not_depend_on_filtering() {
    let only = Battery::new(small(false, Some(vec!["first-order".into()]))).unwrap().run();
    let all = Battery::new(small(false, None)).unwrap().run();
    let from_all = all.groups.iter().find(|g| g.name == "first-order").unwrap();
    assert_eq!(&only.groups[0], from_all);
}

#[test]
fn unknown_group_is_rejected() {
    assert!(Battery::new(small(false, Some(vec!["nope".into()]))).is_err());
}
