import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from mpc.domain.model.value_objects.DecisionBlocks import SharedBlock
from mpc.domain.model.value_objects.OcpVariant import OcpVariant


class SharingLayout:
    """
    Value Object: index maps of the consensus splitting
    The global copy z is the concatenation of the blocks z_j in id order;
    subsystem i's shared vector w_N_i concatenates the blocks of its neighbors
    in ascending order, so z_j sits at the same offsets in every copy.
    """

    def __init__(self, model: NetworkModel, variant: OcpVariant):
        self.model = model
        self.variant = variant
        self.block_sizes = {
            j: SharedBlock.size(model.subsystem(j).n, model.T, variant) for j in model.ids
        }

        offset, self.block_slices = 0, {}
        for j in model.ids:
            self.block_slices[j] = slice(offset, offset + self.block_sizes[j])
            offset += self.block_sizes[j]
        self.size = offset

        self.local_slices: dict[int, dict[int, slice]] = {}
        for i in model.ids:
            offset, slices = 0, {}
            for j in model.neighbors(i):
                slices[j] = slice(offset, offset + self.block_sizes[j])
                offset += self.block_sizes[j]
            self.local_slices[i] = slices

        # by symmetry of the neighbor sets, block j is held by every i in N_j
        self.holders = {j: tuple(i for i in model.ids if j in model.neighbors(i)) for j in model.ids}

    def local_size(self, i: int) -> int:
        return sum(self.block_sizes[j] for j in self.model.neighbors(i))

    def zeros(self) -> np.ndarray:
        return np.zeros(self.size)

    def local_zeros(self, i: int) -> np.ndarray:
        return np.zeros(self.local_size(i))

    def gather(self, z: np.ndarray, i: int) -> np.ndarray:
        """z_N_i, the blocks of z subsystem i holds a copy of"""
        return np.concatenate([z[self.block_slices[j]] for j in self.model.neighbors(i)])

    def block_of(self, w: np.ndarray, i: int, j: int) -> np.ndarray:
        """w_j^(i), block j inside subsystem i's shared vector"""
        return w[self.local_slices[i][j]]

    def average(self, w: dict[int, np.ndarray]) -> np.ndarray:
        """z_j = mean of w_j^(i) over i in N_j; reads only the holders of each block"""
        z = self.zeros()
        for j in self.model.ids:
            copies = [self.block_of(w[i], i, j) for i in self.holders[j]]
            z[self.block_slices[j]] = np.mean(copies, axis=0)
        return z

    def unpack(self, z: np.ndarray) -> dict[int, dict[str, np.ndarray]]:
        """Blocks of z split into x, xe, alpha and c"""
        return {
            j: SharedBlock.unflatten(z[self.block_slices[j]], self.model.subsystem(j).n, self.model.T, self.variant)
            for j in self.model.ids
        }

    def pack(self, blocks: dict[int, dict[str, np.ndarray]]) -> np.ndarray:
        return np.concatenate([SharedBlock.pack(blocks[j], self.variant) for j in self.model.ids])

    def __repr__(self) -> str:
        return f"SharingLayout(M={self.model.M}, size={self.size}, variant={self.variant.value})"
