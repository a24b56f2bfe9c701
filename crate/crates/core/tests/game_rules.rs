use quizboard_core::game::{EffectTag, GameEvent, PassReason, SkipReason};
use quizboard_core::{GameError, GameKind, GameState, Position, SpeedMode, TurnPhase};

/// Independent step-by-step Goose walker over the house table. Returns the
/// resting square and the hold placed on the marker.
fn goose_oracle(start: u32, value: u32, exact: bool) -> (u32, u32, Vec<u32>) {
    fn step(mut pos: u32, value: u32, exact: bool, visited: &mut Vec<u32>) -> u32 {
        let mut dir: i32 = 1;
        for _ in 0..value {
            if pos == 63 {
                if !exact {
                    return pos;
                }
                dir = -1;
            }
            pos = (pos as i32 + dir) as u32;
            visited.push(pos);
        }
        pos
    }
    let geese = [5, 9, 14, 18, 23, 27, 32, 36, 41, 45, 50, 54, 59];
    let mut visited = Vec::new();
    let mut pos = step(start, value, exact, &mut visited);
    let mut hold = 0;
    loop {
        if pos == 63 {
            break;
        }
        if geese.contains(&pos) {
            pos = step(pos, value, exact, &mut visited);
            continue;
        }
        match pos {
            6 => pos = 12,
            42 => pos = 30,
            58 => pos = 1,
            19 => {
                hold = 1;
                break;
            }
            31 => {
                hold = 3;
                break;
            }
            52 => {
                hold = 2;
                break;
            }
            _ => break,
        }
        visited.push(pos);
    }
    (pos, hold, visited)
}

fn game(kind: GameKind, mode: SpeedMode, teams: usize) -> GameState {
    GameState::new(kind, mode, teams, 7).unwrap()
}

fn place(state: &mut GameState, team: usize, marker: usize, pos: Position) {
    state.teams[team].markers[marker].position = pos;
}

fn make_active(state: &mut GameState, team: usize) {
    state.active_team = team;
    state.phase = TurnPhase::AwaitRoll { team };
}

/// Puts the game into the marker-choice phase for `value` so `apply_move` can
/// be exercised directly.
fn choose_phase(state: &mut GameState, team: usize, value: u32) {
    make_active(state, team);
    let candidates = state.legal_moves(value);
    state.dice.last_value = Some(value);
    state.phase = TurnPhase::AwaitMoveChoice { team, value, candidates };
}

fn track(path: &[Position]) -> Vec<u32> {
    path.iter()
        .map(|p| match p {
            Position::Track(i) => *i,
            other => panic!("unexpected {other:?}"),
        })
        .collect()
}

#[test]
fn parcheesi_classic_starts_four_markers_in_nest() {
    let g = game(GameKind::Parcheesi, SpeedMode::Classic, 4);
    for team in &g.teams {
        assert_eq!(team.markers.len(), 4);
        assert!(team.markers.iter().all(|m| m.position == Position::Nest));
    }
    assert_eq!(g.phase, TurnPhase::AwaitRoll { team: g.active_team });
    assert!(!g.dice.locked);
    assert!(g.winner.is_none());
}

#[test]
fn parcheesi_fast_has_two_markers() {
    let g = game(GameKind::Parcheesi, SpeedMode::Fast, 2);
    assert!(g.teams.iter().all(|t| t.markers.len() == 2 && t.marker_count == 2));
}

#[test]
fn linear_games_start_at_zero() {
    for kind in [GameKind::Motorsport, GameKind::Goose] {
        let g = game(kind, SpeedMode::Classic, 3);
        assert!(g.teams.iter().all(|t| t.markers == vec![t.markers[0].clone()]));
        assert!(g.teams.iter().all(|t| t.markers[0].position == Position::Track(0)));
    }
}

#[test]
fn rejects_bad_team_counts() {
    for n in [0, 1, 5] {
        assert_eq!(
            GameState::new(GameKind::Goose, SpeedMode::Classic, n, 1).unwrap_err(),
            GameError::InvalidTeamCount(n)
        );
    }
}

#[test]
fn starting_team_is_uniform_over_seeds() {
    let n = 10_000u64;
    let mut counts = [0u64; 3];
    for seed in 0..n {
        let g = GameState::new(GameKind::Goose, SpeedMode::Classic, 3, seed).unwrap();
        counts[g.active_team] += 1;
    }
    let p = 1.0 / 3.0;
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    for c in counts {
        assert!((c as f64 - n as f64 * p).abs() < 3.0 * sigma, "{counts:?}");
    }
}

#[test]
fn rolls_stay_in_mode_range_and_replay() {
    for mode in SpeedMode::ALL {
        let run = |seed| {
            let mut g = GameState::new(GameKind::Motorsport, mode, 2, seed).unwrap();
            let mut values = Vec::new();
            for _ in 0..500 {
                let (v, _) = g.roll().unwrap();
                values.push(v);
                if g.phase.name() == "await_answer" {
                    g.answer(false).unwrap();
                }
            }
            values
        };
        let a = run(99);
        assert!(a.iter().all(|v| mode.dice().contains(*v)));
        assert_eq!(a, run(99));
        let range = mode.dice();
        for face in range.values() {
            assert!(a.contains(&face));
        }
    }
}

#[test]
fn roll_rejected_while_locked() {
    let mut g = game(GameKind::Goose, SpeedMode::Classic, 2);
    g.roll().unwrap();
    assert!(g.dice.locked);
    assert!(matches!(g.roll(), Err(GameError::WrongPhase("await_answer"))));
}

#[test]
fn motorsport_finishes_on_overshoot() {
    let mut g = game(GameKind::Motorsport, SpeedMode::Classic, 2);
    let t = g.active_team;
    place(&mut g, t, 0, Position::Track(38));
    let moves = g.legal_moves(6);
    assert_eq!(moves.len(), 1);
    assert_eq!(moves[0].destination(), Position::Track(40));
}

#[test]
fn goose_bounces_off_the_end() {
    let mut g = game(GameKind::Goose, SpeedMode::Classic, 2);
    let t = g.active_team;
    place(&mut g, t, 0, Position::Track(60));
    let moves = g.legal_moves(5);
    let (oracle_end, _, _) = goose_oracle(60, 5, true);
    assert_eq!(oracle_end, 61);
    assert_eq!(moves.len(), 1);
    assert_eq!(moves[0].destination(), Position::Track(61));
}

#[test]
fn goose_fast_mode_clamps_to_goal() {
    let mut g = game(GameKind::Goose, SpeedMode::Fast, 2);
    let t = g.active_team;
    place(&mut g, t, 0, Position::Track(60));
    assert_eq!(g.legal_moves(9)[0].destination(), Position::Track(63));
}

#[test]
fn parcheesi_needs_a_five_to_leave_the_nest() {
    let g = game(GameKind::Parcheesi, SpeedMode::Classic, 4);
    assert!(g.legal_moves(3).is_empty());
    let five = g.legal_moves(5);
    // all nest markers are interchangeable, so one candidate
    assert_eq!(five.len(), 1);
    assert_eq!(five[0].path, vec![Position::Track(0)]);
}

#[test]
fn out_of_range_value_has_no_moves() {
    let g = game(GameKind::Goose, SpeedMode::Classic, 2);
    assert!(g.legal_moves(0).is_empty());
    assert!(g.legal_moves(7).is_empty());
}

#[test]
fn goose_chain_ends_at_inn() {
    let mut g = game(GameKind::Goose, SpeedMode::Classic, 2);
    let t = g.active_team;
    place(&mut g, t, 0, Position::Track(4));
    choose_phase(&mut g, t, 5);
    let events = g.apply_move(&g.legal_moves(5)[0].clone()).unwrap();
    let (end, hold, visited) = goose_oracle(4, 5, true);
    assert_eq!((end, hold), (19, 1));
    match &events[0] {
        GameEvent::MarkerMoved { path, effects, .. } => {
            assert_eq!(track(path), visited);
            assert!(visited.contains(&9) && visited.contains(&14));
            assert_eq!(
                effects,
                &vec![EffectTag::GooseAdvance, EffectTag::GooseAdvance, EffectTag::InnSkip(1)]
            );
        }
        other => panic!("expected move, got {other:?}"),
    }
    assert_eq!(g.teams[t].markers[0].position, Position::Track(19));
    assert_eq!(g.teams[t].markers[0].hold_turns_remaining, 1);
}

#[test]
fn goose_bridge_jumps_to_twelve() {
    let mut g = game(GameKind::Goose, SpeedMode::Classic, 2);
    let t = g.active_team;
    place(&mut g, t, 0, Position::Track(3));
    choose_phase(&mut g, t, 3);
    let events = g.apply_move(&g.legal_moves(3)[0].clone()).unwrap();
    assert_eq!(g.teams[t].markers[0].position, Position::Track(12));
    assert!(matches!(&events[0], GameEvent::MarkerMoved { effects, .. } if effects == &vec![EffectTag::BridgeTo(12)]));
}

#[test]
fn goose_death_sends_back_to_one() {
    let mut g = game(GameKind::Goose, SpeedMode::Classic, 2);
    let t = g.active_team;
    place(&mut g, t, 0, Position::Track(55));
    choose_phase(&mut g, t, 3);
    g.apply_move(&g.legal_moves(3)[0].clone()).unwrap();
    assert_eq!(g.teams[t].markers[0].position, Position::Track(1));
}

#[test]
fn every_goose_move_matches_oracle() {
    for mode in SpeedMode::ALL {
        for start in 0..63 {
            for value in mode.dice().values() {
                let mut g = game(GameKind::Goose, mode, 2);
                let t = g.active_team;
                place(&mut g, t, 0, Position::Track(start));
                choose_phase(&mut g, t, value);
                let cand = g.legal_moves(value)[0].clone();
                g.apply_move(&cand).unwrap();
                let (end, hold, _) = goose_oracle(start, value, mode == SpeedMode::Classic);
                let m = &g.teams[t].markers[0];
                assert_eq!(m.position, Position::Track(end), "start {start} value {value} {mode}");
                assert_eq!(m.hold_turns_remaining, hold, "start {start} value {value} {mode}");
                assert_eq!(g.winner.is_some(), end == 63);
            }
        }
    }
}

#[test]
fn advance_turn_is_modular() {
    let mut g = game(GameKind::Goose, SpeedMode::Classic, 3);
    make_active(&mut g, 2);
    let before = g.turn_counter;
    let events = g.advance_turn();
    assert_eq!(g.active_team, 0);
    assert_eq!(events, vec![GameEvent::TurnStarted { team: 0 }]);
    assert_eq!(g.turn_counter, before + 1);
}

#[test]
fn held_team_is_skipped() {
    let mut g = game(GameKind::Goose, SpeedMode::Classic, 3);
    make_active(&mut g, 0);
    place(&mut g, 1, 0, Position::Track(19));
    g.teams[1].markers[0].hold_turns_remaining = 1;
    let before = g.turn_counter;
    let events = g.advance_turn();
    assert_eq!(
        events,
        vec![
            GameEvent::TurnSkipped { team: 1, reason: SkipReason::Inn },
            GameEvent::TurnStarted { team: 2 }
        ]
    );
    assert_eq!(g.teams[1].markers[0].hold_turns_remaining, 0);
    assert_eq!(g.active_team, 2);
    assert_eq!(g.turn_counter, before + 2);
}

#[test]
fn arrival_at_well_frees_the_holder() {
    // scripted two-team replay: team 0 falls in the well, team 1 lands there
    let mut g = game(GameKind::Goose, SpeedMode::Classic, 2);
    place(&mut g, 0, 0, Position::Track(28));
    place(&mut g, 1, 0, Position::Track(29));
    choose_phase(&mut g, 0, 3);
    g.apply_move(&g.legal_moves(3)[0].clone()).unwrap();
    assert_eq!(g.teams[0].markers[0].position, Position::Track(31));
    assert_eq!(g.teams[0].markers[0].hold_turns_remaining, 3);
    assert_eq!(g.active_team, 1);

    choose_phase(&mut g, 1, 2);
    let events = g.apply_move(&g.legal_moves(2)[0].clone()).unwrap();
    assert!(matches!(&events[0], GameEvent::MarkerMoved { effects, .. } if effects == &vec![EffectTag::WellHold]));
    assert_eq!(g.teams[0].markers[0].hold_turns_remaining, 0);
    assert_eq!(g.teams[1].markers[0].hold_turns_remaining, 3);
    // freed team plays straight away
    assert_eq!(g.active_team, 0);
}

#[test]
fn well_releases_after_three_turns() {
    let mut g = game(GameKind::Goose, SpeedMode::Classic, 2);
    place(&mut g, 0, 0, Position::Track(31));
    g.teams[0].markers[0].hold_turns_remaining = 3;
    make_active(&mut g, 1);
    let mut skips = 0;
    for _ in 0..4 {
        let events = g.advance_turn();
        skips += events
            .iter()
            .filter(|e| matches!(e, GameEvent::TurnSkipped { team: 0, reason: SkipReason::Well }))
            .count();
        make_active(&mut g, 1);
    }
    assert_eq!(skips, 3);
}

#[test]
fn parcheesi_capture_on_plain_cell() {
    let mut g = game(GameKind::Parcheesi, SpeedMode::Classic, 2);
    // team 1 enters at ring 22; ring 30 is team 1 step 8 and team 0 step 25
    place(&mut g, 0, 0, Position::Track(25));
    place(&mut g, 1, 0, Position::Track(4));
    choose_phase(&mut g, 1, 4);
    let cand = g.legal_moves(4).into_iter().find(|c| c.marker_id == 0).unwrap();
    assert_eq!(g.route.ring_cell(1, 8), g.route.ring_cell(0, 25));
    let events = g.apply_move(&cand).unwrap();
    assert!(events.contains(&GameEvent::Captured { victim_team: 0, marker_id: 0 }));
    assert_eq!(g.teams[0].markers[0].position, Position::Nest);
}

#[test]
fn parcheesi_no_capture_on_safe_cell() {
    let mut g = game(GameKind::Parcheesi, SpeedMode::Classic, 2);
    // ring 29 is safe: team 0 step 24, team 1 step 7
    place(&mut g, 0, 0, Position::Track(24));
    place(&mut g, 1, 0, Position::Track(3));
    choose_phase(&mut g, 1, 4);
    let cand = g.legal_moves(4).into_iter().find(|c| c.marker_id == 0).unwrap();
    let events = g.apply_move(&cand).unwrap();
    assert!(!events.iter().any(|e| matches!(e, GameEvent::Captured { .. })));
    assert_eq!(g.teams[0].markers[0].position, Position::Track(24));
}

#[test]
fn parcheesi_blockade_cannot_be_passed_or_joined() {
    let mut g = game(GameKind::Parcheesi, SpeedMode::Classic, 2);
    place(&mut g, 1, 0, Position::Track(10));
    place(&mut g, 1, 1, Position::Track(10));
    // team 1 step 10 is ring 32 = team 0 step 27
    place(&mut g, 0, 0, Position::Track(24));
    make_active(&mut g, 0);
    assert!(g.legal_moves(3).iter().all(|c| c.marker_id != 0), "cannot land on a blockade");
    assert!(g.legal_moves(6).iter().all(|c| c.marker_id != 0), "cannot pass a blockade");
    assert!(g.legal_moves(2).iter().any(|c| c.marker_id == 0));
}

#[test]
fn parcheesi_entry_blocked_by_full_cell() {
    let mut g = game(GameKind::Parcheesi, SpeedMode::Classic, 2);
    place(&mut g, 0, 0, Position::Track(0));
    place(&mut g, 0, 1, Position::Track(0));
    make_active(&mut g, 0);
    assert!(g.legal_moves(5).iter().all(|c| c.path != vec![Position::Track(0)]));
}

#[test]
fn parcheesi_home_needs_exact_count_in_classic() {
    let mut g = game(GameKind::Parcheesi, SpeedMode::Classic, 2);
    place(&mut g, 0, 0, Position::HomeColumn(5));
    make_active(&mut g, 0);
    assert!(g.legal_moves(4).iter().all(|c| c.marker_id != 0));
    let exact = g.legal_moves(3).into_iter().find(|c| c.marker_id == 0).unwrap();
    assert_eq!(exact.destination(), Position::Home);

    let mut f = game(GameKind::Parcheesi, SpeedMode::Fast, 2);
    place(&mut f, 0, 0, Position::HomeColumn(5));
    make_active(&mut f, 0);
    let clamped = f.legal_moves(9).into_iter().find(|c| c.marker_id == 0).unwrap();
    assert_eq!(clamped.destination(), Position::Home);
}

#[test]
fn parcheesi_wins_when_all_markers_home() {
    let mut g = game(GameKind::Parcheesi, SpeedMode::Fast, 2);
    place(&mut g, 0, 0, Position::Home);
    place(&mut g, 0, 1, Position::HomeColumn(6));
    choose_phase(&mut g, 0, 4);
    let cand = g.legal_moves(4)[0].clone();
    let events = g.apply_move(&cand).unwrap();
    assert_eq!(events.last(), Some(&GameEvent::GameOver { winner: 0 }));
    assert_eq!(g.phase, TurnPhase::GameOver { winner: 0 });
    assert!(g.advance_turn().is_empty());
}

#[test]
fn wrong_answer_passes_without_moving() {
    let mut g = game(GameKind::Goose, SpeedMode::Classic, 2);
    let t = g.active_team;
    g.roll().unwrap();
    let events = g.answer(false).unwrap();
    assert_eq!(events[0], GameEvent::Answered { team: t, correct: false });
    assert_eq!(events[1], GameEvent::TurnPassed { team: t, reason: PassReason::WrongAnswer });
    assert_eq!(g.teams[t].markers[0].position, Position::Track(0));
    assert_ne!(g.active_team, t);
}

#[test]
fn correct_answer_moves_single_marker() {
    let mut g = game(GameKind::Motorsport, SpeedMode::Classic, 2);
    let t = g.active_team;
    let (value, _) = g.roll().unwrap();
    let events = g.answer(true).unwrap();
    assert!(matches!(&events[1], GameEvent::MarkerMoved { team, .. } if *team == t));
    assert_eq!(g.teams[t].markers[0].position, Position::Track(value));
}

#[test]
fn illegal_choice_rejected() {
    let mut g = game(GameKind::Parcheesi, SpeedMode::Classic, 2);
    place(&mut g, 0, 0, Position::Track(3));
    place(&mut g, 0, 1, Position::Track(9));
    choose_phase(&mut g, 0, 2);
    let mut bogus = g.legal_moves(2)[0].clone();
    bogus.path = vec![Position::Track(40)];
    assert_eq!(g.apply_move(&bogus), Err(GameError::IllegalMove));
}
