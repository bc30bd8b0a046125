import numpy as np
import pytest

from toucan_prep.homographs import default_dictionary
from toucan_prep.phonemes import _data_path, default_feature_table
from toucan_prep.providers import LexiconProvider
from toucan_prep.tagging import FilePosProvider, default_unigram_tagger


@pytest.fixture(scope="session")
def feature_table():
    return default_feature_table()


@pytest.fixture(scope="session")
def dictionary():
    return default_dictionary()


@pytest.fixture(scope="session")
def unigram_tagger():
    return default_unigram_tagger()


@pytest.fixture(scope="session")
def oracle_tagger():
    return FilePosProvider.from_file(_data_path("gold_homographs_tags.tsv"))


@pytest.fixture(scope="session")
def smoke_lexicon():
    return LexiconProvider.from_file(_data_path("smoke/lexicon.tsv"))


@pytest.fixture()
def rng():
    return np.random.default_rng(20230814)
