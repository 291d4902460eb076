"""Kernel selector: compiled _gfcore when available, else _corepy."""

try:
    from . import _gfcore as impl

    BACKEND = "compiled"
except ImportError:  # extension not built
    from . import _corepy as impl

    BACKEND = "python"

trim = impl.trim
add = impl.add
neg = impl.neg
sub = impl.sub
smul = impl.smul
mul = impl.mul
divmod_ = impl.divmod_
gcd_ = impl.gcd_
powmod = impl.powmod
eval_ = impl.eval_
