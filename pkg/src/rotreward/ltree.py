"""Generic labeled ordered trees consumed by the partial matchers."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field


@dataclass
class TreeNode:
    node_id: int
    label: tuple[str, str]  # (kind, attribute digest text)
    children: list["TreeNode"] = field(default_factory=list)
    ordered: bool = False  # True when child positions carry meaning (roles/priority)


@dataclass
class LabeledTree:
    root: TreeNode
    nodes: list[TreeNode]  # preorder; node_id equals list index

    @classmethod
    def build(cls, root: TreeNode) -> "LabeledTree":
        nodes: list[TreeNode] = []

        def visit(node: TreeNode):
            node.node_id = len(nodes)
            nodes.append(node)
            for child in node.children:
                visit(child)

        visit(root)
        return cls(root, nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    def labels(self) -> list[tuple[str, str]]:
        return [n.label for n in self.nodes]

    def structurally_equal(self, other: "LabeledTree") -> bool:
        def eq(a: TreeNode, b: TreeNode) -> bool:
            return (
                a.label == b.label
                and len(a.children) == len(b.children)
                and all(eq(x, y) for x, y in zip(a.children, b.children))
            )

        return eq(self.root, other.root)


def label_digest(kind: str, attr_text: str) -> str:
    return hashlib.blake2b(f"{kind}\x00{attr_text}".encode(), digest_size=8).hexdigest()


def subtree_digest(node: TreeNode) -> str:
    child_digests = [subtree_digest(c) for c in node.children]
    payload = "|".join([node.label[0], node.label[1], *child_digests])
    return hashlib.blake2b(payload.encode(), digest_size=8).hexdigest()
