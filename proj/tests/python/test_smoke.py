import json

import pytest

import forensica

SEALED = {"ground_truth", "fate", "fates", "bodies", "crew_id", "cause", "events", "event_log"}


def keys_in(obj):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield k
            yield from keys_in(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from keys_in(v)


def test_paper_timestamp():
    assert forensica.timestamp(10 * 60 + 41, 10) == "10:51 am"
    assert forensica.timestamp(23 * 60 + 59, 2) == "12:01 am"


@pytest.mark.parametrize("game", ["village", "station"])
def test_generate_is_deterministic(game):
    a = forensica.generate_text(game, 11)
    b = forensica.generate_text(game, "11")
    assert a == b
    assert forensica.serialize(a) == a
    assert forensica.serialize(json.loads(a)) == a
    world = forensica.parse(a)
    assert world["game"] == game
    assert world["format_version"] == forensica.FORMAT_VERSION


def test_seed_changes_world():
    assert forensica.generate_text("station", 1) != forensica.generate_text("station", 2)


def test_strip_removes_sealed_section():
    text = forensica.generate_text("station", 4)
    assert "ground_truth" in json.loads(text)
    assert "ground_truth" not in json.loads(forensica.strip(text))


def test_corrupt_world_reports_path():
    world = forensica.generate("village", 3)
    del world["seed"]
    with pytest.raises(forensica.ForensicaError) as err:
        forensica.serialize(world)
    assert err.value.kind == "corrupt-world"
    assert err.value.path == "/seed"


def test_config_round_trip_and_rejection():
    cfg = forensica.default_config()
    assert forensica.config_digest(cfg) == forensica.config_digest()
    cfg["village"]["kill_rate"] = 0.5
    assert forensica.config_digest(cfg) != forensica.config_digest()
    with pytest.raises(forensica.ForensicaError) as err:
        forensica.generate("village", 1, {"village": {"kill_rate": -1}})
    assert err.value.kind == "invalid-config"
    assert "village.kill_rate" in str(err.value)


def test_calibrate_counts_every_run():
    counts = forensica.calibrate("village", runs=30)
    assert set(counts) == {"EcosystemCollapse", "Famine", "OverrunByPredators"}
    assert sum(counts.values()) == 30
    causes = forensica.calibrate("station", runs=3)
    assert 15 <= sum(causes.values()) <= 18


def test_station_session_flow():
    s = forensica.Session.new("station", 7)
    view = s.view()
    assert view["phase"] == "exploring"
    assert not SEALED & set(keys_in(view))
    r = s.face("e")
    assert r["facing"] == {"dx": 1, "dy": 0}
    assert not SEALED & set(keys_in(r))
    s.move("n")
    assert s.turns == 1
    done = s.report({})
    assert done["score"] == 0
    assert "ground_truth" in done
    with pytest.raises(forensica.ForensicaError) as err:
        s.report({})
    assert err.value.kind == "illegal-state"
    assert "ground_truth" not in s.export()


def test_perfect_report_scores_full_crew():
    world = forensica.generate("station", 5)
    bodies = world["ground_truth"]["station"]["bodies"]
    s = forensica.Session(world)
    entries = {b["body_id"]: {"name": b["name"], "cause": b["cause"]} for b in bodies}
    assert s.report(entries)["score"] == len(bodies)


def test_village_has_no_report():
    s = forensica.Session.new("village", 2)
    with pytest.raises(forensica.ForensicaError):
        s.report({})
    summary = s.quit()["summary"]
    assert summary["tiles_seen"] > 0
    assert s.phase == "ended"


def test_stripped_world_cannot_host_a_station_session():
    with pytest.raises(forensica.ForensicaError):
        forensica.Session(forensica.strip(forensica.generate_text("station", 1)))
