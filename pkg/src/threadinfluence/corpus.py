"""Threaded-discussion corpora: records, validation, and thread structure.

A corpus is a set of threads.  Each thread starts with exactly one initial
post; every other post in the thread is either a self-reply (authored by the
thread originator) or a responding reply (authored by anyone else).  Posts
within a thread are ordered by (timestamp, post_id) so that simultaneous
posts have a stable, reproducible order.

The on-disk format is line-delimited JSON with fields post_id, thread_id,
user_id, timestamp (integer epoch seconds), is_initial (true/false), and
body.  is_initial may be omitted, in which case the earliest post of each
thread is inferred to be the initial one.
"""

from __future__ import annotations

import dataclasses
import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator


@dataclass(frozen=True)
class IngestionIssue:
    """One rejected record or structural problem found during ingestion."""

    kind: str
    message: str
    line_no: int | None = None


class IngestionError(ValueError):
    """Raised when a record stream cannot be assembled into a valid corpus."""

    def __init__(self, issues: list[IngestionIssue]):
        self.issues = list(issues)
        counts = issue_counts(self.issues)
        summary = ", ".join(f"{kind}: {n}" for kind, n in sorted(counts.items()))
        preview = "; ".join(issue.message for issue in self.issues[:5])
        super().__init__(f"{len(self.issues)} problem(s) rejected ({summary}): {preview}")

    @property
    def rejected_count(self) -> int:
        return len(self.issues)


def issue_counts(issues: Iterable[IngestionIssue]) -> dict[str, int]:
    """Per-kind tallies of ingestion issues, for validation reports."""
    return dict(Counter(issue.kind for issue in issues))


@dataclass(frozen=True)
class Post:
    post_id: str
    thread_id: str
    user_id: str
    timestamp: int
    body: str
    is_initial: bool = False

    @property
    def sort_key(self) -> tuple[int, str]:
        # Timestamp ties are broken by post_id everywhere downstream.
        return (self.timestamp, self.post_id)


@dataclass(frozen=True)
class Thread:
    """One discussion thread; ``posts[0]`` is always the initial post."""

    thread_id: str
    posts: tuple[Post, ...]

    @property
    def initial_post(self) -> Post:
        return self.posts[0]

    @property
    def originator(self) -> str:
        return self.posts[0].user_id

    @property
    def self_replies(self) -> tuple[Post, ...]:
        """The originator's posts after the initial one, in thread order."""
        return tuple(p for p in self.posts[1:] if p.user_id == self.originator)

    @property
    def responding_replies(self) -> tuple[Post, ...]:
        """Posts by users other than the originator, in thread order."""
        return tuple(p for p in self.posts[1:] if p.user_id != self.originator)


@dataclass(frozen=True)
class Corpus:
    """Validated collection of threads, ordered by thread_id."""

    threads: tuple[Thread, ...]

    @property
    def thread_count(self) -> int:
        return len(self.threads)

    @property
    def post_count(self) -> int:
        return sum(len(t.posts) for t in self.threads)

    @property
    def users(self) -> frozenset[str]:
        return frozenset(p.user_id for t in self.threads for p in t.posts)

    def iter_posts(self) -> Iterator[Post]:
        for thread in self.threads:
            yield from thread.posts

    def get_thread(self, thread_id: str) -> Thread:
        for thread in self.threads:
            if thread.thread_id == thread_id:
                return thread
        raise KeyError(thread_id)


def first_self_reply(thread: Thread) -> Post | None:
    """Earliest originator post after the initial one, or None.

    "Earliest" follows the thread's (timestamp, post_id) order, so a
    self-reply sharing the initial post's timestamp counts when its
    post_id sorts later.
    """
    for post in thread.posts[1:]:
        if post.user_id == thread.originator:
            return post
    return None


def eligible_threads(corpus: Corpus) -> tuple[Thread, ...]:
    """Threads with at least one responding reply and one self-reply."""
    return tuple(
        t for t in corpus.threads if t.responding_replies and t.self_replies
    )


def build_corpus(posts: Iterable[Post]) -> Corpus:
    """Assemble posts into a validated corpus; is_initial flags are authoritative."""
    return _assemble([(post, True) for post in posts], [])


def parse_corpus(lines: Iterable[str]) -> Corpus:
    """Parse a line-delimited record stream into a validated corpus.

    Blank lines are skipped.  Any malformed record, duplicate post_id, or
    structurally invalid thread raises IngestionError carrying every issue
    found, so a caller can report per-error counts in one pass.
    """
    issues: list[IngestionIssue] = []
    records: list[tuple[Post, bool]] = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        parsed = _parse_record(line, line_no, issues)
        if parsed is not None:
            records.append(parsed)
    return _assemble(records, issues)


def load_corpus(path: str | Path) -> Corpus:
    with open(path, encoding="utf-8") as handle:
        return parse_corpus(handle)


def corpus_to_lines(corpus: Corpus) -> Iterator[str]:
    """Serialize to the line-delimited format; re-parsing yields an equal corpus."""
    for thread in corpus.threads:
        for post in thread.posts:
            record = {
                "post_id": post.post_id,
                "thread_id": post.thread_id,
                "user_id": post.user_id,
                "timestamp": post.timestamp,
                "is_initial": post.is_initial,
                "body": post.body,
            }
            yield json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for line in corpus_to_lines(corpus):
            handle.write(line + "\n")


def _parse_record(
    line: str, line_no: int, issues: list[IngestionIssue]
) -> tuple[Post, bool] | None:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        issues.append(
            IngestionIssue("malformed-line", f"line {line_no}: {exc.msg}", line_no)
        )
        return None
    if not isinstance(raw, dict):
        issues.append(
            IngestionIssue("malformed-line", f"line {line_no}: record is not an object", line_no)
        )
        return None

    missing = [k for k in ("post_id", "thread_id", "user_id", "timestamp", "body") if k not in raw]
    if missing:
        issues.append(
            IngestionIssue(
                "missing-field",
                f"line {line_no}: missing field(s) {', '.join(missing)}",
                line_no,
            )
        )
        return None

    timestamp = raw["timestamp"]
    if isinstance(timestamp, bool) or not isinstance(timestamp, int):
        try:
            timestamp = int(str(timestamp))
        except (TypeError, ValueError):
            issues.append(
                IngestionIssue(
                    "bad-timestamp",
                    f"line {line_no}: timestamp {raw['timestamp']!r} is not epoch seconds",
                    line_no,
                )
            )
            return None

    has_flag = "is_initial" in raw
    is_initial = bool(raw["is_initial"]) if has_flag else False
    post = Post(
        post_id=str(raw["post_id"]),
        thread_id=str(raw["thread_id"]),
        user_id=str(raw["user_id"]),
        timestamp=timestamp,
        body=str(raw["body"]),
        is_initial=is_initial,
    )
    return post, has_flag


def _assemble(
    records: list[tuple[Post, bool]], issues: list[IngestionIssue]
) -> Corpus:
    seen: set[str] = set()
    for post, _ in records:
        if post.post_id in seen:
            issues.append(
                IngestionIssue("duplicate-post-id", f"duplicate post_id {post.post_id!r}")
            )
        seen.add(post.post_id)

    by_thread: dict[str, list[tuple[Post, bool]]] = {}
    for post, has_flag in records:
        by_thread.setdefault(post.thread_id, []).append((post, has_flag))

    threads = []
    for thread_id in sorted(by_thread):
        thread = _assemble_thread(thread_id, by_thread[thread_id], issues)
        if thread is not None:
            threads.append(thread)

    if issues:
        raise IngestionError(issues)
    return Corpus(threads=tuple(threads))


def _assemble_thread(
    thread_id: str, records: list[tuple[Post, bool]], issues: list[IngestionIssue]
) -> Thread | None:
    records = sorted(records, key=lambda item: item[0].sort_key)
    posts = [post for post, _ in records]
    any_flagged = any(has_flag for _, has_flag in records)
    initials = [post for post in posts if post.is_initial]

    if not any_flagged:
        # Flag absent from the input: earliest post is inferred initial.
        posts[0] = dataclasses.replace(posts[0], is_initial=True)
    elif len(initials) == 0:
        issues.append(
            IngestionIssue("initial-post", f"thread {thread_id!r} has no initial post")
        )
        return None
    elif len(initials) > 1:
        ids = ", ".join(p.post_id for p in initials)
        issues.append(
            IngestionIssue(
                "initial-post", f"thread {thread_id!r} has multiple initial posts ({ids})"
            )
        )
        return None
    elif not posts[0].is_initial:
        issues.append(
            IngestionIssue(
                "initial-post",
                f"thread {thread_id!r}: initial post {initials[0].post_id!r} is not the earliest",
            )
        )
        return None

    return Thread(thread_id=thread_id, posts=tuple(posts))
