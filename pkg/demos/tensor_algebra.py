"""
Tensor products under three transforms
======================================

A tour of the L-product: slice-wise matrix products in a transform domain.
"""

import numpy as np

from ltar import Tensor3, TransformKind, l_product
from ltar.transforms import identity_tensor

rng = np.random.default_rng(0)
A = Tensor3(rng.normal(size=(2, 3, 4)))
B = Tensor3(rng.normal(size=(3, 2, 4)))

# the product exists for every transform, and differs between them
for kind in TransformKind:
    P = l_product(A, B, kind)
    print(f"{kind.value:5s} first tube of A*B: {np.round(P.data[0, 0], 4)}")

# under the DFT each entry is a sum of circular convolutions of tubes
conv = sum(
    np.real(np.fft.ifft(np.fft.fft(A.data[0, q]) * np.fft.fft(B.data[q, 0])))
    for q in range(3)
)
print("circular convolution:", np.round(conv, 4))

# every transform has its own identity tensor
I = identity_tensor(2, 4, TransformKind.HAAR)
gap = np.abs(l_product(I, A, TransformKind.HAAR).data - A.data).max()
print(f"|I*A - A| under haar: {gap:.1e}")

# with a single frontal slice the product is ordinary matrix multiplication
a, b = rng.normal(size=(2, 3, 1)), rng.normal(size=(3, 2, 1))
same = np.allclose(l_product(Tensor3(a), Tensor3(b), TransformKind.DCT).data[:, :, 0], a[:, :, 0] @ b[:, :, 0])
print("depth one reduces to matmul:", same)
