import pytest

from threadinfluence.corpus import Post, build_corpus
from threadinfluence.sentiment.lexicons import default_lexicons


def make_post(post_id, thread_id, user_id, timestamp, body="hello there.", is_initial=False):
    return Post(
        post_id=post_id,
        thread_id=thread_id,
        user_id=user_id,
        timestamp=timestamp,
        body=body,
        is_initial=is_initial,
    )


def make_thread_corpus(rows):
    """rows: (post_id, thread_id, user_id, timestamp[, body]) tuples.

    The earliest post of each thread is flagged initial.
    """
    earliest = {}
    for row in rows:
        key = row[1]
        stamp = (row[3], row[0])
        if key not in earliest or stamp < earliest[key]:
            earliest[key] = stamp
    posts = []
    for row in rows:
        body = row[4] if len(row) > 4 else "hello there."
        posts.append(
            make_post(row[0], row[1], row[2], row[3], body, (row[3], row[0]) == earliest[row[1]])
        )
    return build_corpus(posts)


@pytest.fixture(scope="session")
def lexicons():
    return default_lexicons()
