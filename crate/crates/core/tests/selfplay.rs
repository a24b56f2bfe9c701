use quizboard_core::selfplay::{run, SelfPlayConfig};
use quizboard_core::{GameKind, SpeedMode};

#[test]
fn seats_win_equally_often() {
    // the starting team is drawn uniformly, so no seat should be favoured
    let games = 10_000u64;
    let teams = 4;
    let config = SelfPlayConfig { kind: GameKind::Goose, mode: SpeedMode::Classic, teams, games, seed: 42, p_correct: 0.7, jobs: 0 };
    let report = run(&config).unwrap();
    let p = 1.0 / teams as f64;
    let sigma = (games as f64 * p * (1.0 - p)).sqrt();
    let expected = games as f64 * p;
    for (seat, &wins) in report.wins_per_seat.iter().enumerate() {
        let z = (wins as f64 - expected) / sigma;
        assert!(z.abs() < 4.0, "seat {seat} won {wins} of {games} (z = {z:.2})");
    }
    assert_eq!(report.wins_per_seat.iter().sum::<u64>(), games);
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let base = SelfPlayConfig { kind: GameKind::Parcheesi, mode: SpeedMode::Fast, teams: 3, games: 300, seed: 8, p_correct: 0.6, jobs: 1 };
    let one = run(&base).unwrap();
    let many = run(&SelfPlayConfig { jobs: 3, ..base.clone() }).unwrap();
    assert_eq!(one, many);
}
