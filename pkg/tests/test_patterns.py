import itertools
import random
import re

import pytest

from strtype.patterns import PatternError, TokenPattern


def oracle_end(source, text, pos):
    """Longest match via re, tried prefix by prefix.

    re shares membership semantics with the subset engine; only its search
    strategy differs, so exhaustive fullmatch over prefixes is an independent
    longest-match oracle.
    """
    compiled = re.compile(source)
    best = None
    for end in range(pos, len(text) + 1):
        if compiled.fullmatch(text, pos, end):
            best = end
    return best


class TestConstruction:
    @pytest.mark.parametrize("bad", [
        r"(?:ab)",
        r"(?=x)",
        r"a\1",
        r"\q",
        "a[",
        "[]",
        "[z-a]",
        "a{3,1}",
        "a{600}",
        "*a",
        "(ab",
        "ab)",
        "a^b",
        "a$",
        "a\\",
        "a{x}",
    ])
    def test_unsupported_syntax_is_rejected(self, bad):
        with pytest.raises(PatternError):
            TokenPattern(bad)

    def test_supported_syntax_compiles(self):
        for ok in ["[2-9][0-9]{2}", "[0-9a-zA-Z-.]+", r"\.[^/\\]*", "(ab|cd)*x?",
                   "a{2,}", r"\d+\s\w", "auto|[0-9]+"]:
            TokenPattern(ok)


class TestLongestMatch:
    def test_alternation_prefers_longest_not_first(self):
        p = TokenPattern("[0-9a-f]{3}|[0-9a-f]{6}")
        assert p.match_end("aabbcc", 0) == 6
        # re stops at the first branch that matches; that is exactly the
        # behaviour the engine must not have.
        assert re.match("[0-9a-f]{3}|[0-9a-f]{6}", "aabbcc").end() == 3

    def test_anchored_at_position(self):
        p = TokenPattern("[2-9][0-9]{2}")
        assert p.match_end("555-", 0) == 3
        assert p.match_end("x555", 1) == 4
        assert p.match_end("x555", 0) is None

    def test_zero_width_match(self):
        p = TokenPattern("a*")
        assert p.match_end("bbb", 0) == 0
        assert p.match_end("aab", 0) == 2

    def test_no_match_is_none(self):
        assert TokenPattern("[0-9]+").match_end("abc", 0) is None
        assert TokenPattern("x").match_end("", 0) is None


class TestAgainstRe:
    PATTERNS = [
        "[2-9][0-9]{2}",
        "[0-9]{4}",
        "[0-9a-zA-Z]+",
        "[0-9a-zA-Z-]+",
        "[0-9a-zA-Z-.]+",
        "[0-9a-zA-Z _.-]+",
        "[^r]*",
        "a*b",
        "(ab)+a?",
        "a{2,4}b{0,2}",
        "ab|a|abc",
        ".[.].",
        r"\.[0-9]*",
        r"\d+(\.\d+)?",
    ]

    @pytest.mark.parametrize("source", PATTERNS)
    def test_exhaustive_short_strings(self, source):
        p = TokenPattern(source)
        alphabet = "ab9. -r_"
        for n in range(0, 4):
            for chars in itertools.product(alphabet, repeat=n):
                text = "".join(chars)
                assert p.match_end(text, 0) == oracle_end(source, text, 0), (source, text)

    @pytest.mark.parametrize("source", PATTERNS)
    def test_random_longer_strings(self, source):
        p = TokenPattern(source)
        rng = random.Random(12)
        alphabet = "abc019.z -/rAB_\\"
        for _ in range(200):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 12)))
            pos = rng.randrange(0, len(text) + 1)
            assert p.match_end(text, pos) == oracle_end(source, text, pos), (source, text, pos)

    def test_shorthand_classes(self):
        for source, text in [(r"\d+", "123x"), (r"\w+", "ab_9-"), (r"\s+", " \t\nx")]:
            p = TokenPattern(source)
            assert p.match_end(text, 0) == oracle_end(source, text, 0)
