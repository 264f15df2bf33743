"""Seeded village-ruin and station-catastrophe worlds, and sessions to investigate them.

The heavy lifting happens in the compiled ``_forensica`` extension. This layer
converts JSON text to and from Python objects.
"""

import json as _json
from typing import Any, Dict, Optional, Union

from . import _forensica
from ._forensica import FORMAT_VERSION, WORLD_FILE_EXTENSION, ForensicaError

__all__ = [
    "FORMAT_VERSION",
    "WORLD_FILE_EXTENSION",
    "ForensicaError",
    "Session",
    "calibrate",
    "config_digest",
    "default_config",
    "generate",
    "generate_text",
    "parse",
    "serialize",
    "strip",
    "timestamp",
]

Seed = Union[int, str]
Config = Optional[Dict[str, Any]]

# args are (kind, message) or (kind, message, json_pointer).
ForensicaError.kind = property(lambda self: self.args[0] if self.args else None)
ForensicaError.path = property(lambda self: self.args[2] if len(self.args) > 2 else None)
ForensicaError.__str__ = lambda self: str(self.args[1]) if len(self.args) > 1 else Exception.__str__(self)


def _config_text(config: Config) -> Optional[str]:
    return None if config is None else _json.dumps(config)


def default_config() -> Dict[str, Any]:
    return _json.loads(_forensica.default_config())


def config_digest(config: Config = None) -> str:
    return _forensica.config_digest(_config_text(config))


def generate_text(game: str, seed: Seed, config: Config = None) -> str:
    """World file text, byte-identical to what the CLI writes."""
    return _forensica.generate(game, seed, _config_text(config))


def generate(game: str, seed: Seed, config: Config = None) -> Dict[str, Any]:
    return _json.loads(generate_text(game, seed, config))


def serialize(world: Union[str, Dict[str, Any]]) -> str:
    """Canonical text of a world; validates on the way through."""
    text = world if isinstance(world, str) else _json.dumps(world)
    return _forensica.roundtrip(text)


def parse(text: str) -> Dict[str, Any]:
    return _json.loads(_forensica.roundtrip(text))


def strip(world: Union[str, Dict[str, Any]]) -> str:
    text = world if isinstance(world, str) else _json.dumps(world)
    return _forensica.strip(text)


def calibrate(game: str = "village", runs: int = 500, seed_base: Seed = 0, config: Config = None) -> Dict[str, int]:
    return dict(_forensica.calibrate(game, runs, seed_base, _config_text(config)))


def timestamp(start_minute: int, turn: int) -> str:
    return _forensica.timestamp(start_minute, turn)


class Session:
    """One player's walk through a world, speaking the JSON command protocol."""

    def __init__(self, world: Union[str, Dict[str, Any]], config: Config = None):
        text = world if isinstance(world, str) else _json.dumps(world)
        self._s = _forensica.Session(text, _config_text(config))

    @classmethod
    def new(cls, game: str, seed: Seed, config: Config = None) -> "Session":
        return cls(generate_text(game, seed, config), config)

    def command(self, cmd: Union[str, Dict[str, Any]], **fields: Any) -> Dict[str, Any]:
        payload = {"cmd": cmd, **fields} if isinstance(cmd, str) else dict(cmd, **fields)
        return _json.loads(self._s.command(_json.dumps(payload)))

    def move(self, direction: str) -> Dict[str, Any]:
        return self.command("move", dir=direction)

    def face(self, direction: str) -> Dict[str, Any]:
        return self.command("face", dir=direction)

    def inspect(self, x: int, y: int) -> Dict[str, Any]:
        return self.command("inspect", x=x, y=y)

    def read(self, x: int, y: int) -> Dict[str, Any]:
        return self.command("read", x=x, y=y)

    def report(self, entries: Optional[Dict[str, Dict[str, str]]] = None) -> Dict[str, Any]:
        """entries: body id -> {"name": ..., "cause": ...}."""
        return self.command("report", entries=entries or {})

    def quit(self) -> Dict[str, Any]:
        return self.command("quit")

    def view(self) -> Dict[str, Any]:
        return _json.loads(self._s.view())

    def export(self) -> str:
        """World file text without the sealed section."""
        return self._s.export_world()

    @property
    def phase(self) -> str:
        return self._s.phase

    @property
    def game(self) -> str:
        return self._s.game

    @property
    def player(self):
        return self._s.player

    @property
    def turns(self) -> int:
        return self._s.turns
