"""Seeded synthetic corpora with planted influence, plus verification oracles.

The generator plants three recoverable signals:

* sentiment: each post gets a latent posterior drawn from a class band
  (negative below 0.5, positive above) and a body sampled from the
  lexicons with a mixture matching that posterior;
* influence: replies posted before the originator's first self-reply pull
  the originator's later sentiment by ``influence_uplift`` per reply,
  signed by the reply's class, so early repliers cause measurable drift;
* influencers: a planted subset of users posts disproportionately many
  early replies, giving them the highest true influence propensity while
  regular heavy posters out-post them in volume.

With ``influence_uplift = 0`` the originator's self-reply posteriors are
fresh draws from the initial post's class band, making the expected
sentiment change exactly zero: the null case for calibration tests.

The oracles at the bottom re-derive influence counts and betweenness by
brute force and deliberately do not call the production implementations.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping

import numpy as np

from threadinfluence.corpus import Corpus, Post, build_corpus
from threadinfluence.graph import DirectedGraph
from threadinfluence.sentiment.lexicons import default_lexicons
from threadinfluence.sentiment.scoring import PostScore, label_for

_NEUTRAL_WORDS = """
about after again along already always another anyone around asked away back
because been before being between body both came come could day days doctor
doctors done down during each even every find first found from getting going
gone group half having hear heard help her here him his home hospital hour
hours house just know last later least left life like little long look looking
made make many may maybe meet might month months more most much must need
never new next night now often once only other our out over own part people
place post read reading right room said same saw say see seen she side since
some someone something soon started still such take taking tell than that the
their them then there these they thing things think this those thought three
through time times today told took treatment two under until upon visit want
was way week weeks well went were what when where which while who will with
within without year years your
""".split()


@dataclass(frozen=True)
class SynthConfig:
    """Knobs for the generator; defaults give the standard benchmark corpus."""

    user_count: int = 2000
    thread_count: int = 5000
    influencer_count: int = 40
    reply_rate_mean: float = 3.0
    self_reply_probability: float = 0.7
    extra_self_reply_mean: float = 0.6
    first_self_reply_median_hours: float = 17.0
    first_self_reply_sigma: float = 1.0
    reply_delay_median_hours: float = 48.0
    reply_delay_sigma: float = 1.1
    sentiment_margin: float = 0.15    # gap between 0.5 and each class band
    sentiment_band_width: float = 0.30
    influence_uplift: float = 0.15    # posterior shift per early reply
    influencer_reply_probability: float = 0.75
    positive_reply_rate: float = 0.8
    negative_start_rate: float = 0.5
    activity_sigma: float = 1.6       # log-normal spread of user activity
    post_length_mean: float = 18.0
    labeled_sample_size: int = 240
    seed: int = 0

    def __post_init__(self) -> None:
        if self.user_count < 2 or self.thread_count < 1:
            raise ValueError("need at least 2 users and 1 thread")
        if not 0 <= self.influencer_count < self.user_count:
            raise ValueError("influencer_count must be in [0, user_count)")
        for name in (
            "self_reply_probability",
            "influencer_reply_probability",
            "positive_reply_rate",
            "negative_start_rate",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]; got {value}")
        if self.sentiment_margin <= 0 or self.sentiment_band_width <= 0:
            raise ValueError("sentiment band parameters must be positive")
        if self.sentiment_margin + self.sentiment_band_width >= 0.5:
            raise ValueError("sentiment band must stay inside (0, 1)")
        if self.influence_uplift < 0:
            raise ValueError("influence_uplift must be non-negative")


@dataclass(frozen=True)
class ThreadDriver:
    """What actually drove one thread's sentiment change."""

    thread_id: str
    drift: float
    early_reply_ids: tuple[str, ...]


@dataclass
class GroundTruth:
    influencers: frozenset[str]
    post_class: dict[str, int]         # 1 positive, 0 negative
    post_posterior: dict[str, float]   # latent posterior behind each body
    drivers: dict[str, ThreadDriver]
    labeled_sample: tuple[tuple[str, str], ...]  # (post_id, "pos"/"neg")

    def scores(self, threshold: float = 0.5) -> dict[str, PostScore]:
        """The latent posteriors packaged as if a perfect model scored them."""
        return {
            post_id: PostScore(post_id, p, label_for(p, threshold))
            for post_id, p in self.post_posterior.items()
        }


def generate(config: SynthConfig | None = None) -> tuple[Corpus, GroundTruth]:
    """Build a corpus and its ground truth; identical configs give identical output."""
    config = config or SynthConfig()
    rng = np.random.Generator(np.random.PCG64(config.seed))
    vocab = _Vocabulary(rng, config.user_count)

    users = [f"user_{i:05d}" for i in range(config.user_count)]
    influencer_idx = (
        sorted(rng.choice(config.user_count, size=config.influencer_count, replace=False))
        if config.influencer_count
        else []
    )
    influencers = [users[i] for i in influencer_idx]
    influencer_set = set(influencers)
    weights = rng.lognormal(0.0, config.activity_sigma, config.user_count)
    weights /= weights.sum()

    base_time = 1_300_000_000
    horizon = 2 * 365 * 86400

    posts: list[Post] = []
    post_class: dict[str, int] = {}
    post_posterior: dict[str, float] = {}
    drivers: dict[str, ThreadDriver] = {}

    for k in range(config.thread_count):
        thread_id = f"t{k:06d}"
        originator = users[int(rng.choice(config.user_count, p=weights))]
        t0 = base_time + int(rng.integers(0, horizon))
        v0 = 0 if rng.random() < config.negative_start_rate else 1
        p0_posterior = _band_draw(rng, v0, config)

        # Responding replies: volume-driven regulars plus, usually, one
        # deliberately early influencer reply.
        drafts: list[tuple[float, int, str, int, float]] = []
        # (delay_seconds, tiebreak, user, class, posterior)
        for _ in range(int(rng.poisson(config.reply_rate_mean))):
            replier = users[int(rng.choice(config.user_count, p=weights))]
            if replier == originator:
                continue
            delay = rng.lognormal(
                math.log(config.reply_delay_median_hours), config.reply_delay_sigma
            ) * 3600.0
            cls = 1 if rng.random() < config.positive_reply_rate else 0
            drafts.append((delay, 0, replier, cls, _band_draw(rng, cls, config)))

        has_self = rng.random() < config.self_reply_probability
        first_self_delay = (
            rng.lognormal(
                math.log(config.first_self_reply_median_hours),
                config.first_self_reply_sigma,
            )
            * 3600.0
            if has_self
            else None
        )

        if influencers and rng.random() < config.influencer_reply_probability:
            pool = [u for u in influencers if u != originator]
            if pool:
                replier = pool[int(rng.integers(0, len(pool)))]
                if first_self_delay is not None:
                    delay = first_self_delay * rng.uniform(0.05, 0.9)
                else:
                    delay = rng.lognormal(
                        math.log(config.reply_delay_median_hours),
                        config.reply_delay_sigma,
                    ) * 3600.0
                cls = 1 if rng.random() < config.positive_reply_rate else 0
                drafts.append((delay, 0, replier, cls, _band_draw(rng, cls, config)))

        self_delays: list[float] = []
        if has_self and first_self_delay is not None:
            self_delays.append(first_self_delay)
            for _ in range(int(rng.poisson(config.extra_self_reply_mean))):
                gap = rng.lognormal(math.log(24.0), 0.8) * 3600.0
                self_delays.append(self_delays[-1] + gap)
            for delay in self_delays:
                drafts.append((delay, 1, originator, -1, math.nan))

        # Sequential ids in (time, responding-before-self) order make the
        # package's (timestamp, post_id) ordering match generation order.
        drafts.sort(key=lambda d: (d[0], d[1]))
        thread_posts = [
            (f"{thread_id}_p0000", originator, t0, v0, p0_posterior, True)
        ]
        first_self_seq = None
        early_counts = [0, 0]  # negative, positive replies before first self-reply
        early_ids = []
        for seq, (delay, kind, user, cls, posterior) in enumerate(drafts, start=1):
            post_id = f"{thread_id}_p{seq:04d}"
            if kind == 1 and first_self_seq is None:
                first_self_seq = seq
            if kind == 0 and first_self_seq is None:
                early_counts[cls] += 1
                early_ids.append(post_id)
            thread_posts.append(
                (post_id, user, t0 + int(delay), cls, posterior, False)
            )

        # Replies can only have influenced the originator if a self-reply
        # exists to be influenced; otherwise the thread carries no drift.
        if first_self_seq is None:
            drift = 0.0
            early_ids = []
        else:
            drift = config.influence_uplift * (early_counts[1] - early_counts[0])
        drivers[thread_id] = ThreadDriver(thread_id, drift, tuple(early_ids))

        for post_id, user, ts, cls, posterior, is_initial in thread_posts:
            if user == originator and not is_initial:
                posterior = float(np.clip(_band_draw(rng, v0, config) + drift, 0.01, 0.99))
                cls = 1 if posterior > 0.5 else 0
            body = vocab.body(rng, posterior, config, is_initial)
            posts.append(
                Post(
                    post_id=post_id,
                    thread_id=thread_id,
                    user_id=user,
                    timestamp=ts,
                    body=body,
                    is_initial=is_initial,
                )
            )
            post_class[post_id] = cls
            post_posterior[post_id] = float(posterior)

    corpus = build_corpus(posts)

    if config.influence_uplift > 0 and influencers and config.thread_count >= 100:
        # On any non-trivial run the planted users must show the highest
        # propensity to place influencing replies; a violation means the
        # injection machinery broke.
        author = {p.post_id: p.user_id for p in posts}
        early_by_user = Counter(
            author[post_id]
            for driver in drivers.values()
            for post_id in driver.early_reply_ids
        )
        planted = np.mean([early_by_user.get(u, 0) for u in influencers])
        others = np.mean(
            [early_by_user.get(u, 0) for u in users if u not in influencer_set]
        )
        assert planted > others, "planted influencers lost their early-reply edge"

    all_ids = [p.post_id for p in posts]
    sample_size = min(config.labeled_sample_size, len(all_ids))
    chosen = rng.choice(len(all_ids), size=sample_size, replace=False)
    labeled = tuple(
        (all_ids[i], "pos" if post_class[all_ids[i]] == 1 else "neg")
        for i in sorted(int(c) for c in chosen)
    )

    truth = GroundTruth(
        influencers=frozenset(influencers),
        post_class=post_class,
        post_posterior=post_posterior,
        drivers=drivers,
        labeled_sample=labeled,
    )
    return corpus, truth


def _band_draw(rng: np.random.Generator, cls: int, config: SynthConfig) -> float:
    """Latent posterior from the class band: above 0.5 + margin for the
    positive class, mirrored below for the negative class."""
    low = 0.5 + config.sentiment_margin
    high = low + config.sentiment_band_width
    draw = rng.uniform(low, high)
    return float(draw if cls == 1 else 1.0 - draw)


class _Vocabulary:
    """Token pools for body assembly, fixed per generation run."""

    def __init__(self, rng: np.random.Generator, user_count: int):
        lexicons = default_lexicons()
        self.positive = sorted(lexicons.positive_terms)
        self.negative = sorted(lexicons.negative_terms)
        self.pos_emoticons = sorted(lexicons.positive_emoticons)
        self.neg_emoticons = sorted(lexicons.negative_emoticons)
        self.slang = sorted(lexicons.slang_terms)
        self.boosters = sorted(lexicons.booster_terms)
        self.neutral = _NEUTRAL_WORDS
        self.user_count = user_count

    def body(
        self,
        rng: np.random.Generator,
        posterior: float,
        config: SynthConfig,
        is_initial: bool,
    ) -> str:
        length = max(4, int(rng.poisson(config.post_length_mean)))
        intensity = abs(posterior - 0.5) * 2.0
        dominant = 0.16 + 0.30 * intensity
        opposite = 0.05
        p_pos, p_neg = (dominant, opposite) if posterior > 0.5 else (opposite, dominant)
        p_emo_pos, p_emo_neg = (0.03, 0.01) if posterior > 0.5 else (0.01, 0.03)
        probs = np.array([p_pos, p_neg, p_emo_pos, p_emo_neg, 0.03, 0.05, 0.02, 0.0])
        probs[-1] = max(0.0, 1.0 - probs.sum())
        counts = rng.multinomial(length, probs / probs.sum())

        pools = (
            self.positive,
            self.negative,
            self.pos_emoticons,
            self.neg_emoticons,
            self.slang,
            self.boosters,
            None,  # mentions
            self.neutral,
        )
        tokens: list[str] = []
        for pool, count in zip(pools, counts):
            for _ in range(int(count)):
                if pool is None:
                    tokens.append(f"userid_{int(rng.integers(0, self.user_count))}")
                else:
                    tokens.append(pool[int(rng.integers(0, len(pool)))])
        tokens = [tokens[i] for i in rng.permutation(len(tokens))]

        terminal = "?" if is_initial and rng.random() < 0.35 else (
            "!" if posterior > 0.5 and rng.random() < intensity else "."
        )
        return " ".join(tokens) + terminal


# ---------------------------------------------------------------------------
# Ground-truth writers


def write_influencers(truth: GroundTruth, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for user in sorted(truth.influencers):
            handle.write(user + "\n")


def write_post_labels(truth: GroundTruth, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["post_id", "label"])
        for post_id in sorted(truth.post_class):
            writer.writerow([post_id, "pos" if truth.post_class[post_id] == 1 else "neg"])


def write_labeled_sample(truth: GroundTruth, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["post_id", "label"])
        for post_id, label in truth.labeled_sample:
            writer.writerow([post_id, label])


def read_labeled_posts(path: str | Path) -> list[tuple[str, str]]:
    """CSV of post_id,label rows with label in {pos, neg}."""
    out = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            label = row["label"].strip()
            if label not in ("pos", "neg"):
                raise ValueError(f"label for {row['post_id']!r} must be pos or neg")
            out.append((row["post_id"], label))
    return out


# ---------------------------------------------------------------------------
# Independent oracles (deliberately brute force; no production imports)


def oracle_irr_counts(
    corpus: Corpus, scores: Mapping[str, PostScore], threshold: float = 0.5
) -> dict[str, int]:
    """Literal re-scan of the influential-reply definition, for verification."""
    counts = {u: 0 for u in sorted(corpus.users)}
    for thread in corpus.threads:
        ordered = sorted(thread.posts, key=lambda p: (p.timestamp, p.post_id))
        p0 = ordered[0]
        originator = p0.user_id
        self_replies = [p for p in ordered[1:] if p.user_id == originator]
        responding = [p for p in ordered[1:] if p.user_id != originator]
        if not self_replies or not responding:
            continue
        s1 = self_replies[0]
        start = scores[p0.post_id].posterior
        moved = scores[s1.post_id].posterior
        if moved == start:
            continue
        s1_key = (s1.timestamp, s1.post_id)
        p0_key = (p0.timestamp, p0.post_id)
        for reply in responding:
            key = (reply.timestamp, reply.post_id)
            if not (p0_key < key < s1_key):
                continue
            posterior = scores[reply.post_id].posterior
            if moved > start and posterior > threshold:
                counts[reply.user_id] += 1
            elif moved < start and posterior < threshold:
                counts[reply.user_id] += 1
    return counts


def oracle_betweenness(graph: DirectedGraph) -> dict[str, float]:
    """Exact betweenness by enumerating every shortest path (<= 10 nodes)."""
    if len(graph.nodes) > 10:
        raise ValueError("oracle_betweenness is exhaustive; use at most 10 nodes")
    centrality = {n: Fraction(0) for n in graph.nodes}
    for source in graph.nodes:
        dist = {source: 0}
        frontier = [source]
        while frontier:
            nxt = []
            for v in frontier:
                for w in graph.successors[v]:
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        nxt.append(w)
            frontier = nxt

        for target in graph.nodes:
            if target == source or target not in dist:
                continue
            paths = _all_shortest_paths(graph, dist, source, target)
            transit = Counter(v for path in paths for v in path[1:-1])
            for v, through in transit.items():
                centrality[v] += Fraction(through, len(paths))
    return {n: float(c) for n, c in centrality.items()}


def _all_shortest_paths(
    graph: DirectedGraph, dist: dict[str, int], source: str, target: str
) -> list[list[str]]:
    if target == source:
        return [[source]]
    paths = []
    for pred in graph.nodes:
        if dist.get(pred, -1) == dist[target] - 1 and target in graph.successors[pred]:
            for path in _all_shortest_paths(graph, dist, source, pred):
                paths.append(path + [target])
    return paths
