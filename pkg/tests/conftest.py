from __future__ import annotations

import pytest

import gibbsfactor as gf


@pytest.fixture(scope="session")
def adhoc5():
    return gf.example_system("adhoc5")


@pytest.fixture(scope="session")
def fullshift4():
    return gf.example_system("fullshift4")


@pytest.fixture(scope="session")
def nongibbs6():
    return gf.example_system("nongibbs6")


@pytest.fixture(scope="session")
def converse_false():
    return gf.example_system("converse_false")


@pytest.fixture(scope="session")
def adhoc5_constants(adhoc5):
    return gf.uniform_constants(adhoc5)


@pytest.fixture(scope="session")
def fullshift4_constants(fullshift4):
    return gf.uniform_constants(fullshift4)
