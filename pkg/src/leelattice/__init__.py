"""Lee-metric decoding of q-ary lattices obtained by Construction A."""
