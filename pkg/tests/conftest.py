import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))  # for the corpus helper

from eae_sat import parse

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")

S1 = "exists z. forall x. exists y. (x = y)"
S2 = "exists z. forall x. exists y. (P(x) & ~P(z))"
S3 = "exists z. forall x. exists y. (E(x,y) & ~E(x,x))"
S4 = "exists z. forall x. exists y. (~R(z,x) & R(z,y))"
S5 = "exists z. forall x. exists y. ((P(x) -> ~P(y)) & (~P(x) -> P(y)))"


@pytest.fixture(scope="session")
def s1():
    return parse(S1)


@pytest.fixture(scope="session")
def s2():
    return parse(S2)


@pytest.fixture(scope="session")
def s3():
    return parse(S3)


@pytest.fixture(scope="session")
def s4():
    return parse(S4)


@pytest.fixture(scope="session")
def s5():
    return parse(S5)


def fixture_path(name):
    return os.path.join(FIXTURE_DIR, name)
