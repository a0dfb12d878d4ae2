"""Music player orchestration demo over mock web services."""

from .driver import DemoRun, Player, run_demo
from .hopfm import (EVENTS, HopfmEvents, artist_bio, artist_image_race, artist_info,
                    build_hopfm, gui, playlist_mgr, random_playlist, similar_artist,
                    track_mgr)
from .services import Catalog, DemoConfigError, MockServices, load_catalog

__all__ = [
    "DemoRun", "Player", "run_demo", "EVENTS", "HopfmEvents", "artist_bio",
    "artist_image_race", "artist_info", "build_hopfm", "gui", "playlist_mgr",
    "random_playlist", "similar_artist", "track_mgr", "Catalog", "DemoConfigError",
    "MockServices", "load_catalog",
]
