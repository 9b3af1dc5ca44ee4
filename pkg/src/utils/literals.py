"""Distribution literal syntax.

    bern(p)                 Bernoulli
    disc(x1:p1, x2:p2, ...) finite discrete
    gauss(mu, sigma)        Gaussian
    pois(lambda)            Poisson
    mix(w1*D1 + w2*D2 ...)  mixture of base laws

Names are case-insensitive and whitespace is ignored between tokens.
"""
import re
from typing import List, Tuple
from ..models.distribution import Distribution, Bernoulli, FiniteDiscrete, Gaussian, Poisson, Mixture
from ..models.errors import LiteralSyntaxError

TOKEN_PATTERN = re.compile(r"""
    \s*(?:
        (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
      | (?P<name>[A-Za-z]+)
      | (?P<punct>[(),:*+-])
    )""", re.VERBOSE)

GRAMMAR = "bern(p) | disc(x1:p1,x2:p2,...) | gauss(mu,sigma) | pois(lambda) | mix(w1*D1 + w2*D2)"


class _Parser:
    """Recursive-descent parser over a token list"""

    def __init__(self, text: str):
        self.text = text
        self.tokens: List[Tuple[str, str, int]] = self._tokenize(text)
        self.index = 0

    def _tokenize(self, text: str) -> List[Tuple[str, str, int]]:
        tokens = []
        position = 0
        stripped = text.rstrip()
        while position < len(stripped):
            match = TOKEN_PATTERN.match(stripped, position)
            if not match:
                raise LiteralSyntaxError(text, position, "unexpected character")
            kind = match.lastgroup
            tokens.append((kind, match.group(kind), match.start(kind)))
            position = match.end()
        return tokens

    def _peek(self) -> Tuple[str, str, int]:
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return ("end", "", len(self.text))

    def _take(self, kind: str, value: str = None) -> str:
        token_kind, token_value, position = self._peek()
        if token_kind != kind or (value is not None and token_value != value):
            expected = value or kind
            raise LiteralSyntaxError(self.text, position, f"expected {expected!r}, found {token_value or 'end of input'!r}")
        self.index += 1
        return token_value

    def _number(self) -> float:
        sign = 1.0
        if self._peek()[1] == "-":
            self._take("punct", "-")
            sign = -1.0
        return sign * float(self._take("number"))

    def parse(self) -> Distribution:
        distribution = self._distribution()
        kind, value, position = self._peek()
        if kind != "end":
            raise LiteralSyntaxError(self.text, position, f"trailing input {value!r}")
        return distribution

    def _distribution(self) -> Distribution:
        _, name_value, position = self._peek()
        name = self._take("name").lower()
        self._take("punct", "(")
        if name == "bern":
            result = Bernoulli(self._number())
        elif name == "gauss":
            mean = self._number()
            self._take("punct", ",")
            result = Gaussian(mean, self._number())
        elif name == "pois":
            result = Poisson(self._number())
        elif name == "disc":
            atoms, probs = [], []
            while True:
                atoms.append(self._number())
                self._take("punct", ":")
                probs.append(self._number())
                if self._peek()[1] != ",":
                    break
                self._take("punct", ",")
            result = FiniteDiscrete(tuple(atoms), tuple(probs))
        elif name == "mix":
            weights, components = [], []
            while True:
                weights.append(self._number())
                self._take("punct", "*")
                components.append(self._distribution())
                if self._peek()[1] != "+":
                    break
                self._take("punct", "+")
            result = Mixture(tuple(weights), tuple(components))
        else:
            raise LiteralSyntaxError(self.text, position, f"unknown distribution {name_value!r}")
        self._take("punct", ")")
        return result


def parse_distribution(text: str) -> Distribution:
    """Parse a distribution literal; raises LiteralSyntaxError or InvalidDistributionError"""
    return _Parser(text).parse()


def format_distribution(distribution: Distribution) -> str:
    return distribution.to_literal()
