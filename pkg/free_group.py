"""Reduced words in F_k and endomorphisms given by generator images.

A letter is a pair (index, sign) with index in 1..k and sign in {+1, -1}.
Words are freely reduced when they are constructed, so every function here may
assume reduced input. Generators print as a, b, c, ...; the letter t is
skipped because it names the stable letter of the mapping torus.
"""
import functools
from dataclasses import dataclass, field
import numpy as np
from errors import GeneratorIndexError, RankMismatch, InputError

ALPHABET = "abcdefghijklmnopqrsuvwxyz"

def default_names(rank):
    """Names of the first @rank generators."""
    if rank > len(ALPHABET):
        raise InputError(f"At most {len(ALPHABET)} named generators.")
    return tuple(ALPHABET[:rank])

def _free_reduce(letters):
    """Stack-based free reduction of a letter sequence."""
    stack = []
    for letter in letters:
        if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)

def invert_letters(letters):
    """Formal inverse of a letter sequence."""
    return tuple((index, -sign) for index, sign in reversed(letters))

@dataclass(frozen=True)
class Word:
    """A freely reduced word over generators 1..@rank."""
    letters: tuple
    rank: int

    def __post_init__(self):
        letters = tuple((int(index), int(sign)) for index, sign in self.letters)
        for index, sign in letters:
            if not 1 <= index <= self.rank:
                raise GeneratorIndexError(
                    f"Generator {index} out of range 1..{self.rank}.")
            if sign not in (1, -1):
                raise InputError(f"Letter sign must be +1 or -1, got {sign}.")
        object.__setattr__(self, "letters", _free_reduce(letters))

    def __mul__(self, other):
        """Concatenation followed by free reduction."""
        if self.rank != other.rank:
            raise RankMismatch(f"Ranks {self.rank} and {other.rank} differ.")
        return Word(self.letters + other.letters, self.rank)

    def inverse(self):
        """The inverse word."""
        return Word(invert_letters(self.letters), self.rank)

    __invert__ = inverse

    def is_identity(self):
        """True iff this is the empty word."""
        return not self.letters

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_word(self)

def reduce(letters, k):
    """Returns the freely reduced Word spelled by @letters over rank @k."""
    return Word(tuple(letters), k)

def identity_word(k):
    """The empty word of rank @k."""
    return Word((), k)

def generator(index, k, sign=1):
    """The one-letter word x_index^sign."""
    return Word(((index, sign),), k)

def format_word(word, names=None):
    """Writes @word in the DSL, e.g. "ab^-1a"; the empty word is ""."""
    names = names or default_names(word.rank)
    return "".join(names[index - 1] + ("" if sign == 1 else "^-1")
                   for index, sign in word.letters)

@dataclass(frozen=True)
class Endo:
    """The endomorphism x_i -> images[i - 1] of F_rank.

    @names are the generator names used for I/O; they do not take part in
    equality, so two endomorphisms compare by their images alone.
    """
    rank: int
    images: tuple
    names: tuple = field(default=None, compare=False)

    def __post_init__(self):
        images = tuple(self.images)
        if len(images) != self.rank:
            raise RankMismatch(
                f"Expected {self.rank} images, got {len(images)}.")
        for image in images:
            if not isinstance(image, Word) or image.rank != self.rank:
                raise RankMismatch(f"Image {image!r} is not a rank-{self.rank} Word.")
        object.__setattr__(self, "images", images)
        names = tuple(self.names) if self.names else default_names(self.rank)
        assert len(names) == self.rank
        object.__setattr__(self, "names", names)

    def __str__(self):
        return format_endo(self)

def make_endo(images, names=None):
    """Builds an Endo from a list of letter sequences (one per generator)."""
    rank = len(images)
    return Endo(rank, tuple(reduce(image, rank) for image in images), names)

def identity_endo(k, names=None):
    """The identity endomorphism of F_k."""
    return Endo(k, tuple(generator(i, k) for i in range(1, k + 1)), names)

def format_endo(phi):
    """Writes @phi in the DSL, e.g. "a->ab, b->ba"."""
    return ", ".join(f"{name}->{format_word(image, phi.names)}"
                     for name, image in zip(phi.names, phi.images))

def apply_endo(phi, word):
    """Substitutes phi's images into @word and reduces.

    The result is a homomorphism: apply(uv) = apply(u) apply(v).
    """
    if phi.rank != word.rank:
        raise RankMismatch(f"Endo rank {phi.rank} vs word rank {word.rank}.")
    letters = []
    for index, sign in word.letters:
        image = phi.images[index - 1].letters
        letters.extend(image if sign == 1 else invert_letters(image))
    return Word(tuple(letters), phi.rank)

def compose(phi, psi):
    """phi o psi, i.e. x -> phi(psi(x))."""
    if phi.rank != psi.rank:
        raise RankMismatch(f"Ranks {phi.rank} and {psi.rank} differ.")
    return Endo(phi.rank, tuple(apply_endo(phi, image) for image in psi.images),
                phi.names)

@functools.lru_cache(maxsize=4096)
def power_endo(phi, n):
    """The n-fold composition phi^n; phi^0 is the identity."""
    if n < 0:
        raise InputError(f"power_endo needs n >= 0, got {n}.")
    if n == 0:
        return identity_endo(phi.rank, phi.names)
    if n == 1:
        return phi
    return compose(phi, power_endo(phi, n - 1))

def exponent_sums(word):
    """Vector of exponent sums of x_1..x_k in @word."""
    sums = [0] * word.rank
    for index, sign in word.letters:
        sums[index - 1] += sign
    return sums

def abelianization(phi):
    """Returns (M, in_derived) where M[i][j] is the exponent sum of x_j in w_i.

    With this row convention M(phi o psi) = M(psi) . M(phi). @in_derived is
    True iff M is zero, i.e. phi maps F_k into [F_k, F_k]; then every solvable
    image of the mapping torus is cyclic.
    """
    matrix = np.array([exponent_sums(image) for image in phi.images],
                      dtype=object).reshape(phi.rank, phi.rank)
    return matrix, not any(matrix.flatten())
