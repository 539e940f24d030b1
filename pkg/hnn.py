"""Elements of the mapping torus HNN_phi(F_k) = <F_k, t | t x t^-1 = phi(x)>.

Every element can be written t^-m u t^n with m, n >= 0 and u in F_k. The
normal form is that triple with the extra requirement that it cannot be
shortened: not (m > 0 and n > 0 and u in phi(F_k)). For injective phi this
form is unique, so it solves the word problem.
"""
from dataclasses import dataclass
from errors import EndoMismatch, GeneratorIndexError, InputError
from free_group import (Word, apply_endo, power_endo,
                        format_word, invert_letters, _free_reduce)
from stallings import require_injective, preimage

# Letter index of the stable letter; generators are 1..k.
T = 0

@dataclass(frozen=True)
class HnnWord:
    """A word over x_1..x_k and t; letters are (index, sign), t has index 0."""
    letters: tuple
    endo: object

    def __post_init__(self):
        letters = tuple((int(index), int(sign)) for index, sign in self.letters)
        for index, sign in letters:
            if not 0 <= index <= self.endo.rank:
                raise GeneratorIndexError(
                    f"Letter index {index} out of range 0..{self.endo.rank}.")
            if sign not in (1, -1):
                raise InputError(f"Letter sign must be +1 or -1, got {sign}.")
        object.__setattr__(self, "letters", _free_reduce(letters))

    def __mul__(self, other):
        if self.endo != other.endo:
            raise EndoMismatch("Words over different mapping tori.")
        return HnnWord(self.letters + other.letters, self.endo)

    def inverse(self):
        """The formal inverse."""
        return HnnWord(invert_letters(self.letters), self.endo)

    __invert__ = inverse

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_hnn_word(self)

def from_word(word, endo):
    """The element of F_k <= HNN_phi(F_k) spelled by @word."""
    if word.rank != endo.rank:
        raise InputError(f"Word rank {word.rank} vs endo rank {endo.rank}.")
    return HnnWord(word.letters, endo)

def stable_letter(endo, power=1):
    """t^power."""
    sign = 1 if power >= 0 else -1
    return HnnWord(((T, sign),) * abs(power), endo)

def format_hnn_word(word):
    """Space-separated tokens, e.g. "t a t^-1 b"; the empty word is ""."""
    names = ("t",) + tuple(word.endo.names)
    return " ".join(names[index] + ("" if sign == 1 else "^-1")
                    for index, sign in word.letters)

@dataclass(frozen=True)
class NormalForm:
    """The element t^-m . u . t^n."""
    m: int
    u: Word
    n: int

    def is_identity(self):
        """True iff m = n = 0 and u is empty."""
        return is_identity(self)

    def __str__(self):
        return f"({self.m}, {format_word(self.u)}, {self.n})"

def _push(stack, letters):
    """Appends @letters to a reduced stack, cancelling as it goes."""
    for letter in letters:
        if stack and stack[-1] == (letter[0], -letter[1]):
            stack.pop()
        else:
            stack.append(letter)

def normal_form(word):
    """The canonical (m, u, n) of @word; the endo must be injective."""
    phi = word.endo
    require_injective(phi)
    m, n = 0, 0
    # u is kept as a reduced letter stack while scanning.
    stack = []
    for index, sign in word.letters:
        if index == T:
            if sign == 1:
                n += 1
            elif n > 0:
                n -= 1
            else:
                m += 1
                stack = list(apply_endo(phi, Word(tuple(stack), phi.rank)).letters)
            continue
        image = power_endo(phi, n).images[index - 1].letters
        _push(stack, image if sign == 1 else invert_letters(image))
    u = Word(tuple(stack), phi.rank)
    while m > 0 and n > 0:
        source = preimage(phi, u)
        if source is None:
            break
        u, m, n = source, m - 1, n - 1
    return NormalForm(m, u, n)

def is_identity(nf):
    """True iff the canonical form @nf is the identity element."""
    return nf.m == 0 and nf.n == 0 and nf.u.is_identity()

def equal(lhs, rhs):
    """Word problem: do @lhs and @rhs name the same group element?"""
    if lhs.endo != rhs.endo:
        raise EndoMismatch(f"{lhs.endo} vs {rhs.endo}.")
    return normal_form(lhs) == normal_form(rhs)

def expand(nf, endo):
    """The HnnWord t^-m u t^n of a normal form."""
    return stable_letter(endo, -nf.m) * from_word(nf.u, endo) * stable_letter(endo, nf.n)
