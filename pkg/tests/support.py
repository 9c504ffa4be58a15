"""Shared test fixtures: reference-table loading and synthetic datasets."""

from __future__ import annotations

import csv
import json
import random
from pathlib import Path

from charnet.graph import EpisodeKey, SegmentGraph, add_interaction
from charnet.ingest import RatingsTable, serialize_episode
from charnet.metrics import EpisodeMetrics

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "reference"

SERIES = ("got", "hoc", "bb")

# metric columns present in the reference per-episode tables (active_nodes is not)
REFERENCE_COLUMNS = (
    "density",
    "efficiency",
    "transitivity",
    "strength_max",
    "strength_std",
    "degree_max",
    "degree_std",
    "harmonic_max",
    "harmonic_std",
    "eigen_max",
    "eigen_std",
)


def load_reference_metrics(
    series: str, dedup: bool = True
) -> tuple[list[EpisodeMetrics], RatingsTable]:
    """Reference per-episode rows as EpisodeMetrics plus their review scores.

    The got table repeats episode 1; dedup keeps the first occurrence the
    same way the loader does.
    """
    rows: list[EpisodeMetrics] = []
    ratings = RatingsTable()
    seen: set[int] = set()
    with open(DATA_DIR / f"{series}_metrics.csv", newline="", encoding="utf-8") as fh:
        for record in csv.DictReader(fh):
            episode = int(record["episode"])
            if episode in seen:
                if dedup:
                    continue
            seen.add(episode)
            key = EpisodeKey(series, 1, episode)
            rows.append(
                EpisodeMetrics(
                    key=key,
                    ordinal=episode,
                    active_nodes=0,  # column absent from the reference tables
                    density=float(record["density"]),
                    efficiency=float(record["efficiency"]),
                    transitivity=float(record["transitivity"]),
                    strength_max=float(record["strength_max"]),
                    strength_std=float(record["strength_std"]),
                    degree_max=int(record["degree_max"]),
                    degree_std=float(record["degree_std"]),
                    harmonic_max=float(record["harmonic_max"]),
                    harmonic_std=float(record["harmonic_std"]),
                    eigen_max=float(record["eigen_max"]),
                    eigen_std=float(record["eigen_std"]),
                )
            )
            ratings.ratings.setdefault(key, float(record["review"]))
    return rows, ratings


def load_reference_correlations() -> dict[tuple[str, str], tuple[float, float, str]]:
    """(series, metric attr) -> (rho, p, stars) as printed in the reference table."""
    out: dict[tuple[str, str], tuple[float, float, str]] = {}
    with open(DATA_DIR / "reference_correlations.csv", newline="", encoding="utf-8") as fh:
        for record in csv.DictReader(fh):
            out[(record["series"], record["metric"])] = (
                float(record["rho"]),
                float(record["p"]),
                record["stars"],
            )
    return out


CAST = [
    "Avery Hale",
    "Brook Marsh",
    "Casey Voss",
    "Devon Reyes",
    "Ellis Ward",
    "Frankie Soto",
    "Gray Holt",
    "Harper Quill",
    "Indigo Trent",
    "Jules Adler",
]


def random_segments(rng: random.Random, count: int | None = None) -> list[SegmentGraph]:
    """Segment list with at least one edge per segment and no duplicates."""
    segments = []
    for index in range(count or rng.randint(3, 6)):
        segment = SegmentGraph(index=index)
        pool = [(a, b) for i, a in enumerate(CAST) for b in CAST[i + 1 :]]
        for a, b in rng.sample(pool, rng.randint(1, 6)):
            add_interaction(segment, a, b, round(rng.uniform(1.0, 120.0), 3))
        segments.append(segment)
    return segments


def build_demo_dataset(
    dest: Path,
    series: tuple[str, ...] = ("alpha", "beta"),
    episodes: int = 6,
    seed: int = 20240817,
) -> tuple[Path, Path]:
    """Clean synthetic dataset: every episode rated, no warnings expected.

    Returns (segments_dir, ratings_csv).
    """
    rng = random.Random(seed)
    segments_dir = dest / "segments"
    segments_dir.mkdir(parents=True, exist_ok=True)
    ratings_lines = ["series,season,episode,rating"]
    for name in series:
        for episode in range(1, episodes + 1):
            key = EpisodeKey(name, 1, episode)
            text = serialize_episode(key, random_segments(rng))
            (segments_dir / f"{name}_s01e{episode:02d}.json").write_text(
                text, encoding="utf-8"
            )
            ratings_lines.append(f"{name},1,{episode},{round(rng.uniform(6.5, 9.5), 3)}")
    ratings_csv = dest / "ratings.csv"
    ratings_csv.write_text("\n".join(ratings_lines) + "\n", encoding="utf-8")
    return segments_dir, ratings_csv


def build_messy_dataset(dest: Path, seed: int = 555) -> tuple[Path, Path]:
    """Dataset that should load with warnings: a duplicate episode key, an
    isolated node, a duplicate edge declaration, an unrated episode, and a
    rating without an episode."""
    segments_dir, ratings_csv = build_demo_dataset(
        dest, series=("gamma",), episodes=5, seed=seed
    )
    duplicate = {
        "series": "gamma",
        "season": 1,
        "episode": 1,
        "segments": [
            {"index": 0, "edges": [{"a": "Avery Hale", "b": "Brook Marsh", "w": 3.0}]}
        ],
    }
    (segments_dir / "zz_duplicate.json").write_text(
        json.dumps(duplicate), encoding="utf-8"
    )
    messy = {
        "series": "gamma",
        "season": 1,
        "episode": 6,  # not rated
        "segments": [
            {
                "index": 0,
                "nodes": ["Loner Vale"],
                "edges": [
                    {"a": "Avery Hale", "b": "Brook Marsh", "w": 2.0},
                    {"a": "Brook Marsh", "b": "Avery Hale", "w": 1.0},
                ],
            }
        ],
    }
    (segments_dir / "gamma_s01e06.json").write_text(json.dumps(messy), encoding="utf-8")
    with open(ratings_csv, "a", encoding="utf-8") as fh:
        fh.write("gamma,1,9,8.1\n")  # rating without an episode
    return segments_dir, ratings_csv
