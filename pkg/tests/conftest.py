import pytest

import corpus


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """The synthetic trial corpus, built once per session."""
    path = tmp_path_factory.mktemp("corpus")
    corpus.build(path)
    return path


@pytest.fixture(scope="session")
def expected_report_text():
    return corpus.expected_report_text()
