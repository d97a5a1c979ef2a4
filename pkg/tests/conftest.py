import random

import pytest

from poorman.game import random_choice_tree, random_game


def small_games(seed, count, max_interior=4, dag=None):
    """Deterministic stream of valid games with at most max_interior + 2 vertices."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        is_dag = rng.random() < 0.3 if dag is None else dag
        out.append(random_game(rng, rng.randint(1, max_interior), dag=is_dag, edge_prob=rng.uniform(0.3, 0.7)))
    return out


def dag_games(seed, count):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        if i % 2:
            out.append(random_choice_tree(rng, 2, max_side=4))
        else:
            out.append(random_game(rng, rng.randint(1, 6), dag=True))
    return out


@pytest.fixture(scope="session")
def oracle_games():
    return small_games(2024, 220)
