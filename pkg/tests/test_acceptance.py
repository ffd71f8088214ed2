"""Exit criteria: reference experiments at their fixed tolerances.

One PASS/FAIL line per criterion is printed in the terminal summary.
"""

import pytest

from conftest import ACCEPTANCE_LINES
from publadder.validation import CRITERIA


@pytest.mark.acceptance
@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.__name__ for c in CRITERIA])
def test_criterion(criterion):
    result = criterion()
    ACCEPTANCE_LINES.append(result.line())
    print(result.line())
    for detail in result.details:
        print("   ", detail)
    failed = [d for d in result.details if d.startswith("[FAIL")]
    assert result.passed, "\n".join(failed)
