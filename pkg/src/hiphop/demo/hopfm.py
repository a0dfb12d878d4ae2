"""The music player orchestration program, written with the public combinators.

``playlist_mgr`` and ``track_mgr`` are reconstructions from one-line
descriptions; the other components keep the structure of the original code.
GUI updates become lines passed to a ``log`` callable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

from ..ast import (Statement, TrapLabel, and_, apply, eq, atom, emit, exit_, if_, local, loop,
                   now, par, pause, preval, seq, trap, val)
from ..bridge import with_hop
from ..derived import await_, every, until
from ..events import Event, input_event, local_event, output_event
from .services import Catalog

Log = Callable[[str], None]


def _earliest(a, b):
    # Deterministic choice between two simultaneous playlists.
    return min(a, b, key=lambda v: json.dumps(v, sort_keys=True))


@dataclass(frozen=True)
class HopfmEvents:
    musicstate: Event = input_event("musicstate")
    track: Event = input_event("track")
    artist: Event = output_event("artist")
    album: Event = output_event("album")
    playlist: Event = output_event("playlist", combiner=_earliest)
    queued: Event = output_event("queued")
    bio: Event = output_event("bio")
    discog: Event = output_event("discog")
    similar: Event = output_event("similar")

    def interface(self):
        return (self.musicstate, self.track, self.artist, self.album, self.playlist,
                self.queued, self.bio, self.discog, self.similar)


EVENTS = HopfmEvents()


def _nonempty(x):
    return bool(x)


def _first(xs):
    return xs[0]


def _artist_of(t):
    return t["artist"]


def _album_of(t):
    return t["album"]


def _playlist_artist(tracks):
    return tracks[0]["artist"]


def _differs(a, b):
    return a != b


def _stopping(state):
    return state in ("stop", "ended")


def _quiet(line: str) -> None:
    pass


def random_playlist(catalog: Catalog, genre: str, playlist: Event) -> Statement:
    """Draw random artists until one has tracks, then emit its track list."""
    found = TrapLabel("found")
    artist = local_event("local-artist")
    tracks = local_event("local-playlist")
    return trap(found, loop(local(
        [artist, tracks],
        with_hop("hopfm/genre/artist/random", [genre, catalog.name], artist),
        if_(now(artist), seq(
            with_hop("hopfm/artist/tracks", [val(artist)], tracks),
            if_(now(tracks), if_(apply(_nonempty, val(tracks)), seq(
                emit(playlist, val(tracks)),
                exit_(found)))))))))


def playlist_mgr(catalog: Catalog, genre: str, musicstate: Event, playlist: Event,
                 queued: Event) -> Statement:
    """Announce each new playlist; search a fresh artist whenever the player idles."""
    idle = and_(now(musicstate), eq(val(musicstate), "idle"))
    return par(every(now(playlist), emit(queued, apply(_playlist_artist, val(playlist)))),
               every(idle, random_playlist(catalog, genre, playlist)))


def track_mgr(track: Event, album: Event, artist: Event) -> Statement:
    """Emit ``album``/``artist`` when a new track changes them."""
    def announce_changes():
        return seq(
            if_(apply(_differs, apply(_album_of, val(track)), preval(album)),
                emit(album, apply(_album_of, val(track)))),
            if_(apply(_differs, apply(_artist_of, val(track)), preval(artist)),
                emit(artist, apply(_artist_of, val(track)))))

    return await_(now(track),
                  emit(album, apply(_album_of, val(track))),
                  emit(artist, apply(_artist_of, val(track))),
                  loop(pause(), if_(now(track), announce_changes())))


def similar_artist(artist: Event, similar: Event, playlist: Event) -> Statement:
    """Ask for similar artists and offer the first one's tracks as next playlist."""
    tracks = local_event("similar-playlist")
    return local(
        [tracks],
        with_hop("echonest/similar", [val(artist)], similar),
        if_(now(similar), if_(apply(_nonempty, val(similar)), seq(
            with_hop("hopfm/artist/tracks", [apply(_first, val(similar))], tracks),
            if_(now(tracks), if_(apply(_nonempty, val(tracks)),
                                 emit(playlist, val(tracks))))))))


def artist_bio(artist: Event, bio: Event, discog: Event) -> Statement:
    return par(with_hop("musicbrainz/bio", [val(artist)], bio),
               with_hop("fma/discog", [val(artist)], discog))


def artist_image_race(artist: Event, log: Log = _quiet,
                      image: Optional[Event] = None) -> Statement:
    """Ask two image services; the first success cancels the other request.

    When ``image`` is given the winning URL is also emitted on it.
    """
    img = local_event("img", combiner=min)
    done = TrapLabel("done")
    visible = atom(lambda v: log(f"image: visible {v.val(img)}"))
    if image is not None:
        visible = seq(emit(image, val(img)), visible)
    return local(
        [img],
        trap(done, par(
            seq(with_hop("fma/image", [val(artist)], img), if_(now(img), exit_(done))),
            seq(with_hop("echonest/image", [val(artist)], img), if_(now(img), exit_(done))))),
        if_(now(img), visible, atom(lambda v: log("image: hidden"))))


def artist_info(artist: Event, bio: Event, discog: Event, similar: Event,
                playlist: Event, log: Log = _quiet) -> Statement:
    """Restart all lookups each time the artist changes."""
    return every(now(artist), par(
        similar_artist(artist, similar, playlist),
        artist_bio(artist, bio, discog),
        artist_image_race(artist, log)))


def _show(zone: str, event: Event, log: Log) -> Statement:
    def update(view):
        value = view.val(event)
        if isinstance(value, dict):
            value = f"{value['artist']} - {value['title']}"
        elif isinstance(value, list):
            value = ", ".join(map(str, value))
        log(f"{zone}: {value}")

    return loop(if_(now(event), atom(update)), pause())


def gui(ev: HopfmEvents, log: Log = _quiet) -> Statement:
    return par(_show("state", ev.musicstate, log), _show("track", ev.track, log),
               _show("album", ev.album, log), _show("artist", ev.artist, log),
               _show("bio", ev.bio, log), _show("discog", ev.discog, log),
               _show("similar", ev.similar, log))


def build_hopfm(catalog: Catalog, genre: str, events: Optional[HopfmEvents] = None,
                log: Log = _quiet) -> Statement:
    """All components in parallel, killed together once the player stops or ends."""
    catalog.check_genre(genre)
    ev = events or EVENTS
    return until(apply(_stopping, val(ev.musicstate)), par(
        random_playlist(catalog, genre, ev.playlist),
        playlist_mgr(catalog, genre, ev.musicstate, ev.playlist, ev.queued),
        track_mgr(ev.track, ev.album, ev.artist),
        artist_info(ev.artist, ev.bio, ev.discog, ev.similar, ev.playlist, log),
        gui(ev, log)))
