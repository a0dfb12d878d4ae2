"""Music catalog and deterministic in-process mock services."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources
from typing import Any, Dict, List, Optional

from ..bridge import Completion, ServiceCall
from ..errors import HipHopError


class DemoConfigError(HipHopError):
    """Bad catalog file or unknown genre."""


@dataclass(frozen=True)
class Catalog:
    name: str
    genres: Dict[str, List[str]]
    artists: Dict[str, Dict[str, Any]]
    services: Dict[str, Dict[str, Any]]

    def tracks(self, artist: str) -> List[Dict[str, Any]]:
        out = []
        for album, songs in self.artists[artist]["albums"].items():
            for title, duration in songs:
                out.append({"artist": artist, "album": album, "title": title,
                            "duration": duration})
        return out

    def check_genre(self, genre: str) -> None:
        if genre not in self.genres:
            raise DemoConfigError(f"unknown genre {genre!r}; known: {sorted(self.genres)}")


def load_catalog(path: Optional[str] = None) -> Catalog:
    """Read a catalog file; the bundled one when ``path`` is None."""
    try:
        if path is None:
            text = resources.files(__package__).joinpath("catalog.json").read_text("utf-8")
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        raw = json.loads(text)
        cat = Catalog(raw["name"], raw["genres"], raw["artists"], raw["services"])
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise DemoConfigError(f"cannot read catalog: {exc}") from exc
    for genre, names in cat.genres.items():
        for n in names:
            if n not in cat.artists:
                raise DemoConfigError(f"genre {genre!r} lists unknown artist {n!r}")
    for name, spec in cat.services.items():
        lo, hi = spec["latency"]
        if not 0 <= lo <= hi:
            raise DemoConfigError(f"bad latency range for {name!r}")
    return cat


class MockServices:
    """Service client answering from a catalog after a seeded latency in ticks.

    A latency of 0 answers from inside ``issue``, i.e. while the issuing
    reaction is still finishing; the machine must hold it for the next one.
    """

    def __init__(self, catalog: Catalog, seed: int = 0):
        self.catalog = catalog
        self.rng = random.Random(seed)
        self.tick = 0
        self.calls: Dict[int, ServiceCall] = {}
        self.issued_at: Dict[int, int] = {}
        self.delivered_at: Dict[int, int] = {}
        self.immediate: set = set()
        self.outcomes: Dict[int, bool] = {}
        self.cancelled: List[int] = []
        self._due: Dict[int, tuple] = {}
        self._sink = None

    def issue(self, call: ServiceCall, sink) -> None:
        spec = self.catalog.services.get(call.service_name)
        if spec is None:
            raise KeyError(f"no such service {call.service_name!r}")
        self._sink = sink
        self.calls[call.token] = call
        self.issued_at[call.token] = self.tick
        lo, hi = spec["latency"]
        latency = self.rng.randint(lo, hi)
        if self.rng.random() < spec["failure_rate"]:
            completion = Completion.failure(call.token, "service unavailable")
        else:
            completion = self._answer(call)
        self.outcomes[call.token] = completion.ok
        if latency == 0:
            self.immediate.add(call.token)
            self.delivered_at[call.token] = self.tick
            sink(completion)
        else:
            self._due[call.token] = (self.tick + latency, completion)

    def cancel(self, token: int) -> None:
        self.cancelled.append(token)
        self._due.pop(token, None)

    def advance(self, tick: int) -> None:
        """Deliver every completion due at or before ``tick``."""
        self.tick = tick
        ready = sorted((due, tok) for tok, (due, _) in self._due.items() if due <= tick)
        for _, tok in ready:
            _, completion = self._due.pop(tok)
            self.delivered_at[tok] = tick
            self._sink(completion)

    def _answer(self, call: ServiceCall) -> Completion:
        cat, token, args = self.catalog, call.token, call.args
        service = call.service_name
        if service == "hopfm/genre/artist/random":
            names = cat.genres.get(args[0])
            if not names:
                return Completion.failure(token, "unknown genre")
            return Completion.success(token, self.rng.choice(names))
        artist = cat.artists.get(args[0]) if args else None
        if artist is None:
            return Completion.failure(token, "unknown artist")
        if service == "hopfm/artist/tracks":
            return Completion.success(token, cat.tracks(args[0]))
        if service == "echonest/similar":
            return Completion.success(token, list(artist["similar"]))
        if service == "musicbrainz/bio":
            return Completion.success(token, artist["bio"])
        if service == "fma/discog":
            return Completion.success(token, list(artist["albums"]))
        if service in ("fma/image", "echonest/image"):
            url = artist["images"].get(service.split("/")[0])
            if url is None:
                return Completion.failure(token, "no image")
            return Completion.success(token, url)
        return Completion.failure(token, "unsupported service")
