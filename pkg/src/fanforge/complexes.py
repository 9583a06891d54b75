"""Conical complexes: posets of cones glued along saturated face inclusions.

Each cone of a complex lives in its own coordinates: its lattice is Z^dim
through an implicit chosen basis, and gluing happens only through the
injective face matrices i_{tau,sigma}.  There is no global ambient space;
fans are imported through an adapter that computes the face matrices from a
shared ambient lattice, and every cone keeps an `anchor` reference to the
original input cone whose chart contains it (used by traces and maps).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import exactlin as xl
from .cones import Cone
from .exactlin import Mat, Vec


class UnknownId(KeyError):
    pass


class NotPrimitive(ValueError):
    pass


class NotInterior(ValueError):
    pass


class StarsNotDisjoint(ValueError):
    pass


class NotFaceClosed(ValueError):
    pass


class MapInvalid(ValueError):
    pass


@dataclass(frozen=True)
class CCone:
    """A cone of a complex, in its own lattice coordinates Z^dim.

    emb columns express the cone's own basis inside the anchor cone's
    coordinates; amb (optional) does the same for an ambient space when the
    complex was imported from a fan.
    """
    cid: int
    dim: int
    verts: tuple[Vec, ...]
    anchor: int
    emb: Mat
    amb: Mat | None = None

    def standalone(self) -> Cone:
        return Cone(self.verts, ambient_dim=self.dim)


@dataclass(frozen=True)
class StarCenter:
    carrier: int
    vector: Vec  # own coordinates of the carrier cone


@dataclass(frozen=True)
class Violation:
    clause: str
    cones: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.clause}: cones {self.cones} {self.detail}".rstrip()


def _solve_matrix(a: Mat, b: Mat) -> Mat | None:
    """Integer X with a·X = b, or None."""
    n, c = xl.mat_shape(a)
    if n == c and a == xl.identity(n):
        return b
    cols = xl.solve_columns(a, xl.matrix_columns(b))
    if any(x is None for x in cols):
        return None
    if not cols:
        return tuple(() for _ in range(xl.mat_shape(a)[1]))
    return xl.columns_matrix(cols)


class ConicalComplex:
    def __init__(self, cones: dict[int, CCone], face_mats: dict[tuple[int, int], Mat],
                 adjacency=None):
        if list(cones) == sorted(cones):
            self.cones = dict(cones)
        else:
            self.cones = dict(sorted(cones.items()))
        self.face_mats = dict(face_mats)
        zeros = [c.cid for c in self.cones.values() if c.dim == 0]
        if len(zeros) != 1:
            raise ValueError(f"complex must contain exactly one zero cone, found {zeros}")
        self.zero_id = zeros[0]
        self._standalone_cache: dict[int, Cone] = {}
        self._rays_cache: dict[int, list] = {}
        self._det_cache: dict[int, int] = {}
        if adjacency is not None:
            self._subs, self._sups = adjacency
        else:
            self._subs = {c: [] for c in self.cones}
            self._sups = {c: [] for c in self.cones}
            for (s, t) in self.face_mats:
                self._subs[t].append(s)
                self._sups[s].append(t)

    # -- basic queries --------------------------------------------------------

    def __contains__(self, cid):
        return cid in self.cones

    def cone(self, cid) -> CCone:
        try:
            return self.cones[cid]
        except KeyError:
            raise UnknownId(cid) from None

    def standalone(self, cid) -> Cone:
        if cid not in self._standalone_cache:
            self._standalone_cache[cid] = self.cone(cid).standalone()
        return self._standalone_cache[cid]

    def is_face(self, sub, sup) -> bool:
        return sub == sup or (sub, sup) in self.face_mats

    def face_matrix(self, sub, sup) -> Mat:
        if sub == sup:
            return xl.identity(self.cone(sub).dim)
        return self.face_mats[(sub, sup)]

    def face_ids(self, cid) -> list[int]:
        self.cone(cid)
        return sorted(self._subs[cid] + [cid])

    def coface_ids(self, cid) -> list[int]:
        self.cone(cid)
        return sorted(self._sups[cid] + [cid])

    def maximal_ids(self) -> list[int]:
        return sorted(c for c in self.cones if not self._sups[c])

    def ray_ids(self) -> list[int]:
        return sorted(c.cid for c in self.cones.values() if c.dim == 1)

    def rays_of(self, cid) -> list[tuple[int, Vec]]:
        """Dim-1 faces of the cone with their vertex vector in its coordinates."""
        if cid not in self._rays_cache:
            out = []
            for rho in self.face_ids(cid):
                if self.cone(rho).dim == 1:
                    out.append((rho, xl.mat_vec(self.face_matrix(rho, cid), (1,))))
            self._rays_cache[cid] = out
        return self._rays_cache[cid]

    def vertex_vector(self, ray_id, cid) -> Vec:
        return xl.mat_vec(self.face_matrix(ray_id, cid), (1,))

    # -- stars, links, subcomplexes -------------------------------------------

    def star(self, tau) -> set[int]:
        self.cone(tau)
        return set(self._sups[tau]) | {tau}

    def closed_star(self, tau) -> set[int]:
        out = set()
        for s in self.star(tau):
            out.update(self._subs[s])
            out.add(s)
        return out

    def link(self, tau) -> set[int]:
        return self.closed_star(tau) - self.star(tau)

    def is_subcomplex(self, ids) -> bool:
        ids = set(ids)
        if not ids <= set(self.cones):
            return False
        return all(set(self.face_ids(c)) <= ids for c in ids)

    def subcomplex(self, ids) -> "ConicalComplex":
        ids = set(ids)
        if not self.is_subcomplex(ids):
            raise NotFaceClosed(f"{sorted(ids)} is not closed under faces")
        cones = {c: self.cones[c] for c in ids}
        mats = {(s, t): m for (s, t), m in self.face_mats.items() if s in ids and t in ids}
        return ConicalComplex(cones, mats)

    def sing_set(self) -> tuple[list[int], list[int], list[int]]:
        """(irreducible singular faces, their subcomplex closure, regular cones)."""
        sing = [c for c in sorted(self.cones)
                if self.standalone(c).is_irreducible_singular]
        closure = set()
        for c in sing:
            closure.update(self.face_ids(c))
        reg = [c for c in sorted(self.cones) if self.standalone(c).is_regular]
        return sing, sorted(closure), reg

    # -- validation ------------------------------------------------------------

    def validate(self) -> list[Violation]:
        out = []
        for cid in sorted(self.cones):
            cc = self.cones[cid]
            try:
                sa = cc.standalone()
                if not sa.is_strictly_convex:
                    out.append(Violation("convexity", (cid,), "contains a line"))
                    continue
                if sa.dim != cc.dim:
                    out.append(Violation("convexity", (cid,),
                                         f"vertices span dim {sa.dim} != {cc.dim}"))
                    continue
                if tuple(sorted(sa.vertices())) != tuple(sorted(cc.verts)):
                    out.append(Violation("vertices", (cid,),
                                         "stored generators are not the minimal primitive set"))
            except ValueError as e:
                out.append(Violation("convexity", (cid,), str(e)))
                continue
        for (sub, sup), m in sorted(self.face_mats.items()):
            csub, csup = self.cones[sub], self.cones[sup]
            if xl.mat_shape(m) != (csup.dim, csub.dim):
                out.append(Violation("face_image", (sub, sup), "matrix shape mismatch"))
                continue
            cols = xl.matrix_columns(m)
            if len(xl.elementary_divisors(m)) != csub.dim:
                out.append(Violation("injectivity", (sub, sup), "face map not injective"))
                continue
            if csub.dim and not all(d == 1 for d in xl.elementary_divisors(m)):
                out.append(Violation("saturation", (sub, sup),
                                     "image lattice not saturated"))
            image = tuple(sorted(_primitive_image(m, v) for v in csub.verts))
            sup_faces = {tuple(sorted(f.vertices())) for f in self.standalone(sup).faces()}
            if image not in sup_faces:
                out.append(Violation("face_image", (sub, sup),
                                     "image is not a face of the supercone"))
        # composition i_{tau,delta} = i_{sigma,delta} i_{tau,sigma}
        for (a, b) in sorted(self.face_mats):
            for c in self.coface_ids(b):
                if c == b:
                    continue
                if (a, c) not in self.face_mats:
                    out.append(Violation("composition", (a, b, c), "missing composite pair"))
                    continue
                lhs = self.face_mats[(a, c)]
                rhs = xl.mat_mul(self.face_mats[(b, c)], self.face_mats[(a, b)])
                if lhs != rhs:
                    out.append(Violation("composition", (a, b, c),
                                         "face maps do not commute"))
        # every geometric face appears as exactly one poset face
        for cid in sorted(self.cones):
            try:
                geo = [tuple(sorted(f.vertices())) for f in self.standalone(cid).faces()]
            except ValueError:
                continue
            poset_images = {}
            for sub in self.face_ids(cid):
                m = self.face_matrix(sub, cid)
                key = tuple(sorted(_primitive_image(m, v) for v in self.cones[sub].verts))
                poset_images.setdefault(key, []).append(sub)
            for key in geo:
                owners = poset_images.get(key, [])
                if len(owners) != 1:
                    out.append(Violation("face_coverage", (cid,),
                                         f"face {key} represented by {owners}"))
        return out

    # -- star subdivision -------------------------------------------------------

    def star_subdivide(self, centers, inplace=False):
        """Multi-center star subdivision at primitive interior vectors.

        centers: list of StarCenter with pairwise disjoint stars.  Returns
        the subdivided complex and, per center index, the map from link
        face id to the id of the new cone spanned with the center ray.

        inplace=True mutates this complex and is reserved for owners of a
        private working copy (the resolution drivers); callers holding
        shared references must use the default pure form.
        """
        centers = list(centers)
        for c in centers:
            self.cone(c.carrier)
            if xl.vec_gcd(c.vector) != 1:
                raise NotPrimitive(f"center {c.vector} in cone {c.carrier}")
            if not self.standalone(c.carrier).interior_own(c.vector):
                raise NotInterior(f"center {c.vector} not interior to cone {c.carrier}")
        stars = [self.star(c.carrier) for c in centers]
        for i, j in itertools.combinations(range(len(centers)), 2):
            if stars[i] & stars[j]:
                raise StarsNotDisjoint(
                    f"carriers {centers[i].carrier}, {centers[j].carrier}")
        order = sorted(range(len(centers)),
                       key=lambda i: (-self.cone(centers[i].carrier).dim, centers[i].carrier))
        removed = set().union(*stars) if stars else set()
        affected = set()
        for rid in removed:
            affected.update(self._subs[rid])
        affected -= removed

        # read-only construction pass over the old complex
        next_id = max(self.cones) + 1
        created: dict[int, dict[int, int]] = {i: {} for i in range(len(centers))}
        sat_of: dict[int, tuple[int, Mat | None]] = {}
        new_cones: dict[int, CCone] = {}
        new_mats: dict[tuple[int, int], Mat] = {}
        new_subs: dict[int, list[int]] = {}
        sup_additions: dict[int, list[int]] = {}
        for i in order:
            center = centers[i]
            tau = center.carrier
            star = stars[i]
            for delta in sorted(self.link(tau)):
                gamma = self._carrier_in_star(delta, star)
                v_g = xl.mat_vec(self.face_matrix(tau, gamma), center.vector)
                dverts_g = [xl.mat_vec(self.face_matrix(delta, gamma), w)
                            for w in self.cones[delta].verts]
                gens = [v_g] + dverts_g
                gcone = self.cones[gamma]
                gdim = gcone.dim
                ndim = self.cones[delta].dim + 1
                if ndim == gdim:
                    # full-dimensional inside gamma: chart carries over
                    smat = None
                    own = list(gens)
                    emb, amb = gcone.emb, gcone.amb
                elif ndim == 1:
                    # saturated face maps keep the center primitive
                    smat = xl.columns_matrix([v_g])
                    own = [(1,)]
                    emb = xl.mat_mul(gcone.emb, smat)
                    amb = xl.mat_mul(gcone.amb, smat) if gcone.amb is not None else None
                else:
                    sat = xl.saturation_basis(gens)
                    assert len(sat) == ndim
                    smat = xl.columns_matrix(sat)
                    own = xl.solve_columns(smat, gens)
                    assert all(y is not None for y in own)
                    emb = xl.mat_mul(gcone.emb, smat)
                    amb = xl.mat_mul(gcone.amb, smat) if gcone.amb is not None else None
                new_cones[next_id] = CCone(
                    cid=next_id, dim=ndim, verts=tuple(sorted(own)),
                    anchor=gcone.anchor, emb=emb, amb=amb)
                new_subs[next_id] = []
                created[i][delta] = next_id
                sat_of[next_id] = (gamma, smat)
                next_id += 1
            # face matrices into the new cones; one elimination per new cone
            for delta, nid in created[i].items():
                gamma, smat = sat_of[nid]
                ndim = new_cones[nid].dim
                jobs = []
                d_to_g = self.face_matrix(delta, gamma)
                for sub in self.face_ids(delta):
                    jobs.append((sub, d_to_g if sub == delta
                                 else xl.mat_mul(d_to_g, self.face_matrix(sub, delta))))
                for dsub in self.face_ids(delta):
                    if dsub == delta or dsub not in created[i]:
                        continue
                    nsub = created[i][dsub]
                    gsub, ssub = sat_of[nsub]
                    assert self.is_face(gsub, gamma)
                    g_to_g = self.face_matrix(gsub, gamma)
                    jobs.append((nsub, g_to_g if ssub is None else xl.mat_mul(g_to_g, ssub)))
                for sub, _ in jobs:
                    new_subs[nid].append(sub)
                    sup_additions.setdefault(sub, []).append(nid)
                if smat is None:
                    for sub, m in jobs:
                        new_mats[(sub, nid)] = m
                else:
                    all_cols = []
                    widths = []
                    for _, m in jobs:
                        cols = xl.matrix_columns(m)
                        widths.append(len(cols))
                        all_cols.extend(cols)
                    solved = xl.solve_columns(smat, all_cols)
                    assert all(x is not None for x in solved)
                    pos = 0
                    for (sub, m), w in zip(jobs, widths):
                        cols = solved[pos:pos + w]
                        pos += w
                        new_mats[(sub, nid)] = (xl.columns_matrix(cols) if cols
                                                else tuple(() for _ in range(ndim)))

        # apply pass
        if inplace:
            cones, mats, subs, sups = self.cones, self.face_mats, self._subs, self._sups
            for rid in removed:
                del cones[rid]
                for s in self._subs[rid]:
                    mats.pop((s, rid), None)
                for t in self._sups[rid]:
                    mats.pop((rid, t), None)
                subs.pop(rid)
                sups.pop(rid)
                self._standalone_cache.pop(rid, None)
                self._rays_cache.pop(rid, None)
                self._det_cache.pop(rid, None)
            for cid in affected:
                sups[cid] = [t for t in sups[cid] if t not in removed]
            cones.update(new_cones)
            mats.update(new_mats)
            for nid, lst in new_subs.items():
                subs[nid] = lst
                sups.setdefault(nid, [])
            for sub, additions in sup_additions.items():
                assert sub in new_subs or sub in affected
                sups[sub].extend(additions)
            return self, created
        cones = dict(self.cones)
        mats = dict(self.face_mats)
        subs = {}
        sups = {}
        for rid in removed:
            del cones[rid]
            for s in self._subs[rid]:
                mats.pop((s, rid), None)
            for t in self._sups[rid]:
                mats.pop((rid, t), None)
        # kept cones keep their faces (removed sets are upward closed), so
        # sub-lists are shared; cones losing cofaces or gaining new ones get
        # fresh lists
        for cid in cones:
            subs[cid] = self._subs[cid]
            sups[cid] = self._sups[cid]
        for cid in affected:
            sups[cid] = [t for t in self._sups[cid] if t not in removed]
        cones.update(new_cones)
        mats.update(new_mats)
        for nid, lst in new_subs.items():
            subs[nid] = lst
            sups.setdefault(nid, [])
        for sub, additions in sup_additions.items():
            # targets are new cones or faces of removed ones: fresh lists
            assert sub in new_subs or sub in affected
            sups[sub].extend(additions)
        result = ConicalComplex(cones, mats, adjacency=(subs, sups))
        # kept cones are identical objects: carry their computed geometry over
        for cid, sa in self._standalone_cache.items():
            if cid in result.cones:
                result._standalone_cache[cid] = sa
        for cid, rays in self._rays_cache.items():
            if cid in result.cones:
                result._rays_cache[cid] = rays
        for cid, d in self._det_cache.items():
            if cid in result.cones:
                result._det_cache[cid] = d
        return result, created

    def simplicial_det(self, cid) -> int | None:
        """Determinant of a simplicial cone from its stored vertices; cached."""
        if cid not in self._det_cache:
            cc = self.cones[cid]
            if len(cc.verts) != cc.dim:
                self._det_cache[cid] = -1  # not simplicial
            elif cc.dim == 0:
                self._det_cache[cid] = 1
            else:
                self._det_cache[cid] = abs(xl.det(xl.columns_matrix(cc.verts)))
        d = self._det_cache[cid]
        return None if d == -1 else d

    def _carrier_in_star(self, delta, star) -> int:
        holders = [s for s in star if self.is_face(delta, s)]
        gamma = min(holders, key=lambda s: (self.cones[s].dim, s))
        assert all(self.is_face(gamma, s) for s in holders), \
            "no unique minimal star member over the link face"
        return gamma

    # -- membership and support --------------------------------------------------

    def contains_point(self, anchor: int, point, original=None) -> bool:
        """Is the rational point (anchor-chart coordinates) in the support?

        `original` is the complex whose cone ids the anchors refer to
        (defaults to self); cones anchored at faces of `anchor` are lifted
        into the anchor chart through the original face matrices.
        """
        original = original or self
        point = tuple(Fraction(x) for x in point)
        if not any(point):
            return True
        for cc in self.cones.values():
            if cc.dim == 0 or not original.is_face(cc.anchor, anchor):
                continue
            lift = xl.mat_mul(original.face_matrix(cc.anchor, anchor), cc.emb)
            own = xl.solve_rational(lift, point)
            if own is None:
                continue
            if any(sum(Fraction(e) * o for e, o in zip(row, own)) != p
                   for row, p in zip(lift, point)):
                continue
            if all(sum(Fraction(n_i) * o for n_i, o in zip(n, own)) >= 0
                   for n in self.standalone(cc.cid).facet_normals):
                return True
        return False


def _primitive_image(m: Mat, v: Vec) -> Vec:
    w = xl.mat_vec(m, v)
    g = xl.vec_gcd(w)
    return tuple(x // g for x in w) if g else w


# -- document serialization -----------------------------------------------------

# Integers are serialized as decimal strings so arbitrary precision survives
# JSON round trips.


def _str_vec(v):
    return [str(x) for x in v]


def _str_mat_rows(m):
    return [[str(x) for x in row] for row in m]


def _parse_vec(v):
    return tuple(int(x) for x in v)


def _parse_mat_rows(rows):
    return tuple(tuple(int(x) for x in row) for row in rows)


def complex_to_doc(k: ConicalComplex) -> dict:
    cones = []
    for cid in sorted(k.cones):
        cc = k.cones[cid]
        basis = cc.amb if cc.amb is not None else xl.identity(cc.dim)
        cones.append({
            "id": cid,
            "dim": cc.dim,
            "lattice_basis": [_str_vec(col) for col in xl.matrix_columns(basis)],
            "generators": [_str_vec(v) for v in cc.verts],
        })
    faces = [{"sub": s, "super": t, "matrix": _str_mat_rows(m)}
             for (s, t), m in sorted(k.face_mats.items())]
    return {"schema_version": 1, "cones": cones, "faces": faces}


def complex_from_doc(doc: dict) -> ConicalComplex:
    cones = {}
    for entry in doc["cones"]:
        cid = int(entry["id"])
        dim = int(entry["dim"])
        basis_cols = [_parse_vec(col) for col in entry["lattice_basis"]]
        amb = xl.columns_matrix(basis_cols) if basis_cols else (
            xl.identity(dim) if dim else ())
        verts = tuple(sorted(_parse_vec(v) for v in entry["generators"]))
        cones[cid] = CCone(cid=cid, dim=dim, verts=verts, anchor=cid,
                           emb=xl.identity(dim), amb=amb)
    mats = {}
    for entry in doc.get("faces", []):
        mats[(int(entry["sub"]), int(entry["super"]))] = _parse_mat_rows(entry["matrix"])
    return ConicalComplex(cones, mats)


# -- builders -----------------------------------------------------------------


def fan_complex(generator_lists, lattice_basis=None, ambient_dim=None) -> ConicalComplex:
    """Complex from cones sharing one ambient lattice (a fan).

    The input cones must pairwise intersect in common faces; all faces are
    enumerated, deduplicated by their ambient vertex sets, and the face
    matrices are solved from the ambient embeddings.
    """
    tops = [Cone(gens, lattice_basis=lattice_basis, ambient_dim=ambient_dim)
            for gens in generator_lists]
    if not tops:
        raise ValueError("fan needs at least one cone")
    by_key: dict[tuple, Cone] = {}
    face_keys: dict[tuple, set[tuple]] = {}
    for top in tops:
        faces = top.faces()
        for f in faces:
            key = tuple(sorted(f.vertices()))
            by_key.setdefault(key, f)
            face_keys.setdefault(key, set())
            for sub in f.faces():
                face_keys[key].add(tuple(sorted(sub.vertices())))
    ordered = sorted(by_key, key=lambda k: (by_key[k].dim, k))
    ids = {key: i for i, key in enumerate(ordered)}
    cones = {}
    embs = {}
    for key, i in ids.items():
        c = by_key[key]
        emb_ambient = c._emb  # ambient x dim embedding of the saturated lattice
        cones[i] = CCone(cid=i, dim=c.dim, verts=tuple(sorted(c.own_vertices)),
                         anchor=i, emb=xl.identity(c.dim), amb=emb_ambient)
        embs[i] = emb_ambient
    mats = {}
    for key, i in ids.items():
        for sub_key in face_keys[key]:
            j = ids[sub_key]
            if j == i:
                continue
            m = _solve_matrix(embs[i], embs[j])
            assert m is not None, "face lattice not contained in supercone lattice"
            mats[(j, i)] = m
    return ConicalComplex(cones, mats)


def single_cone_complex(generators, lattice_basis=None, ambient_dim=None) -> ConicalComplex:
    return fan_complex([generators], lattice_basis=lattice_basis, ambient_dim=ambient_dim)


# -- maps ----------------------------------------------------------------------


@dataclass
class ComplexMap:
    """Cone assignment with per-cone lattice matrices, Def.-style checked."""
    src: ConicalComplex
    dst: ConicalComplex
    assignment: dict[int, int]
    mats: dict[int, Mat]

    def check(self) -> tuple[str, list[str]]:
        """Classify: local_isomorphism / regular_local_projection / general / invalid."""
        problems = []
        for cid in self.src.cones:
            if cid not in self.assignment or cid not in self.mats:
                problems.append(f"cone {cid} has no image data")
        if problems:
            return "invalid", problems
        for cid, cc in self.src.cones.items():
            did = self.assignment[cid]
            if did not in self.dst.cones:
                problems.append(f"image cone {did} unknown")
                continue
            dcone = self.dst.cones[did]
            m = self.mats[cid]
            if xl.mat_shape(m) != (dcone.dim, cc.dim) and not (dcone.dim == 0 and m == ()):
                problems.append(f"matrix shape mismatch on cone {cid}")
                continue
            target = self.dst.standalone(did)
            images = [xl.mat_vec(m, v) for v in cc.verts]
            if not all(target.contains_own(w) for w in images):
                problems.append(f"cone {cid}: image not inside target cone")
                continue
            if cc.dim == 0:
                if dcone.dim != 0:
                    problems.append(f"cone {cid}: interior condition fails")
            elif dcone.dim > 0:
                sample = images[0]
                for w in images[1:]:
                    sample = xl.vec_add(sample, w)
                if not target.interior_own(sample):
                    problems.append(f"cone {cid}: interior condition fails")
            # a positive-dim cone may legitimately collapse onto the zero
            # cone: int({0}) = {0}
        for (sub, sup) in self.src.face_mats:
            dsub, dsup = self.assignment[sub], self.assignment[sup]
            if not self.dst.is_face(dsub, dsup):
                problems.append(f"images of {sub} <= {sup} are not faces")
                continue
            # compare on basis vectors; degenerate zero-cone matrices make
            # matrix products ambiguous
            sub_dim = self.src.cones[sub].dim
            for i in range(sub_dim):
                e = tuple(1 if j == i else 0 for j in range(sub_dim))
                lhs = xl.mat_vec(self.mats[sup],
                                 xl.mat_vec(self.src.face_matrix(sub, sup), e))
                rhs = xl.mat_vec(self.dst.face_matrix(dsub, dsup),
                                 xl.mat_vec(self.mats[sub], e))
                if lhs != rhs:
                    problems.append(f"face maps do not commute over {sub} <= {sup}")
                    break
        if problems:
            return "invalid", problems
        if all(self._is_iso_on(cid) for cid in self.src.cones):
            return "local_isomorphism", []
        if all(self._is_projection_on(cid) for cid in self.src.cones):
            sing_src, _, _ = self.src.sing_set()
            sing_dst, _, _ = self.dst.sing_set()
            if {self.assignment[c] for c in sing_src} == set(sing_dst) and \
                    all(self._is_iso_on(c) for c in sing_src):
                return "regular_local_projection", []
            problems.append("projection does not restrict to Sing isomorphism")
            return "invalid", problems
        return "general", []

    def _is_iso_on(self, cid) -> bool:
        cc = self.src.cones[cid]
        dcone = self.dst.cones[self.assignment[cid]]
        if cc.dim != dcone.dim:
            return False
        m = self.mats[cid]
        if cc.dim and abs(xl.det(m)) != 1:
            return False
        return set(xl.mat_vec(m, v) for v in cc.verts) == set(dcone.verts)

    def _is_projection_on(self, cid) -> bool:
        cc = self.src.cones[cid]
        dcone = self.dst.cones[self.assignment[cid]]
        m = self.mats[cid]
        v0 = [v for v in cc.verts if not any(xl.mat_vec(m, v))]
        v1 = [v for v in cc.verts if any(xl.mat_vec(m, v))]
        if {tuple(xl.mat_vec(m, v)) for v in v1} != set(dcone.verts):
            return False
        if v0 and not Cone(v0, ambient_dim=cc.dim).is_regular:
            return False
        if len(v0) != cc.dim - dcone.dim:
            return False
        divs = xl.elementary_divisors(m)
        if len(divs) != dcone.dim or not all(d == 1 for d in divs):
            return False
        s0 = xl.saturation_basis(v0)
        s1 = xl.saturation_basis(v1)
        if len(s0) + len(s1) != cc.dim:
            return False
        if abs(xl.det(xl.columns_matrix(s0 + s1))) != 1:
            return False
        if s1:
            sec = xl.mat_mul(m, xl.columns_matrix(s1))
            if abs(xl.det(sec)) != 1:
                return False
        return True

    def map_anchor_vector(self, anchor: int, v) -> Vec:
        return xl.mat_vec(self.mats[anchor], v)
