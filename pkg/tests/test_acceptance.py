"""One test per acceptance criterion, each at its stated runtime limit."""
import json

import pytest

from semiring_lab.acceptance import CRITERIA, run_criterion

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number):
    result = run_criterion(number)
    line = result.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    detail = json.dumps(result.details, default=str)
    assert result.passed, f"{line}\n{detail[:3000]}"
    assert result.within_limit, line
