import json
import pathlib

import pytest

import forensica

jsonschema = pytest.importorskip("jsonschema")

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMA = json.loads((ROOT / "docs" / "schema" / "world.schema.json").read_text())


def check(world):
    jsonschema.Draft202012Validator(SCHEMA).validate(world)


@pytest.mark.parametrize("name", ["village-7", "station-7"])
def test_golden_matches_schema(name):
    check(json.loads((ROOT / "tests" / "golden" / f"{name}.forensica.json").read_text()))


@pytest.mark.parametrize("game,seed", [("village", 21), ("station", 21), ("station", 99)])
def test_fresh_and_stripped_worlds_match_schema(game, seed):
    text = forensica.generate_text(game, seed)
    check(json.loads(text))
    check(json.loads(forensica.strip(text)))


def test_schema_rejects_unknown_key():
    world = forensica.generate("village", 1)
    world["extra"] = 1
    with pytest.raises(jsonschema.ValidationError):
        check(world)
