# Independent high-precision oracle for the double sine function
#   ln s_b(z) = i * int_0^inf dy/y [ sin(2yz) / (2 sinh(y/b) sinh(by)) - z/y ]
# valid for |Im z| < Q/2, Q = b + 1/b.  Evaluated with mpmath tanh-sinh
# quadrature at 40 digits; used only to freeze reference values into tests.
import mpmath as mp

mp.mp.dps = 40

def ln_sb_strip(b, z):
    b = mp.mpf(b)
    z = mp.mpc(z)
    Q = b + 1/b
    assert abs(mp.im(z)) < Q/2
    def f(y):
        return (mp.sin(2*y*z)/(2*mp.sinh(y/b)*mp.sinh(b*y)) - z/y)/y
    # split to help tanh-sinh near 0 and for the oscillatory tail
    I = mp.quad(f, [mp.mpf('1e-30'), 1, 5, 20, 60, 200])
    # analytic tail of the -z/y^2 part beyond 200; oscillatory part negligible
    I += -z/mp.mpf(200)
    return mp.mpc(0,1)*I

def sb(b, z):
    return mp.exp(ln_sb_strip(b, z))

def fmt(c):
    return "{%.20e, %.20e}" % (float(mp.re(c)), float(mp.im(c)))

if __name__ == "__main__":
    cases = [
        (0.8, mp.mpc("0.25", "0.1")),
        (0.7, mp.mpc("0.3", "-0.2")),
        (1.0, mp.mpc("-0.4", "0.35")),
        (1.31, mp.mpc("0.15", "0.6")),
        (0.84, mp.mpc("1.7", "0.0")),
        (1.0, mp.mpc("0.0", "0.0")),
        (0.84, mp.mpc("-2.3", "0.41")),
    ]
    for b, z in cases:
        v = sb(b, z)
        print("b=%s z=%s  sb=%s" % (b, mp.nstr(z, 8), fmt(v)))
    # shift-relation cross-check: s_b(z+ib/2)/s_b(z-ib/2) = 2 cosh(pi b z)
    b = mp.mpf('0.8'); z = mp.mpc('0.25','0.1')
    lhs = sb(b, z + mp.mpc(0, b)/2) / sb(b, z - mp.mpc(0, b)/2)
    rhs = 2*mp.cosh(mp.pi*b*z)
    print("shift check:", mp.nstr(abs(lhs-rhs), 5))
    # inversion: s_b(z) s_b(-z) = 1
    print("inversion check:", mp.nstr(abs(sb(b, z)*sb(b, -z) - 1), 5))
    # residue: (z + iQ/2) s_b(z) -> i/(2 pi) as z -> -iQ/2
    Q = b + 1/b
    for eps in ['1e-6','1e-7']:
        zz = mp.mpc(0, -Q/2) + mp.mpf(eps)
        print("residue probe eps=%s:" % eps, fmt((zz + mp.mpc(0, Q/2))*sb(b, zz)*2*mp.pi/mp.mpc(0,1)))
