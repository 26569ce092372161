use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{check_distribution, check_labels, Limits};
use crate::rational::Rational;

/// A sequence of move labels from the root.
pub type History = Vec<String>;

/// Renders a history as `<a, b>`.
pub struct DisplayHistory<'a>(pub &'a [String]);

impl fmt::Display for DisplayHistory<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0.join(", "))
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Recursive description of a game tree; this is also the file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Tree {
    Decision {
        player: String,
        /// Nodes sharing an id form one information set. Defaults to a
        /// singleton named after the node's history.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        info_set: Option<String>,
        /// Histories of the underlying game the mover is aware of here.
        /// Omitted means every history.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        aware_of: Option<Vec<History>>,
        moves: Vec<Branch>,
    },
    Chance {
        moves: Vec<ChanceBranch>,
    },
    Terminal {
        payoffs: Vec<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    pub label: String,
    #[serde(default, rename = "virtual", skip_serializing_if = "is_false")]
    pub is_virtual: bool,
    pub child: Tree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChanceBranch {
    pub label: String,
    pub prob: Rational,
    pub child: Tree,
}

impl Tree {
    pub fn decision(player: &str, info_set: Option<&str>, moves: Vec<(&str, Tree)>) -> Tree {
        Tree::Decision {
            player: player.to_string(),
            info_set: info_set.map(String::from),
            aware_of: None,
            moves: moves
                .into_iter()
                .map(|(label, child)| Branch {
                    label: label.to_string(),
                    is_virtual: false,
                    child,
                })
                .collect(),
        }
    }

    pub fn chance(moves: Vec<(&str, Rational, Tree)>) -> Tree {
        Tree::Chance {
            moves: moves
                .into_iter()
                .map(|(label, prob, child)| ChanceBranch {
                    label: label.to_string(),
                    prob,
                    child,
                })
                .collect(),
        }
    }

    pub fn terminal(payoffs: Vec<Rational>) -> Tree {
        Tree::Terminal { payoffs }
    }

    /// Sets the awareness level of a decision node; no effect elsewhere.
    pub fn aware_of(mut self, histories: Vec<History>) -> Tree {
        if let Tree::Decision { aware_of, .. } = &mut self {
            *aware_of = Some(histories);
        }
        self
    }

    /// Marks the named move of a decision node as virtual.
    pub fn with_virtual(mut self, label: &str) -> Tree {
        if let Tree::Decision { moves, .. } = &mut self {
            for b in moves.iter_mut().filter(|b| b.label == label) {
                b.is_virtual = true;
            }
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Decision {
        player: usize,
        info_set: usize,
        moves: Vec<String>,
        virtual_moves: Vec<bool>,
        children: Vec<usize>,
        awareness: Option<BTreeSet<History>>,
    },
    Chance {
        moves: Vec<String>,
        probs: Vec<Rational>,
        children: Vec<usize>,
    },
    Terminal {
        payoffs: Vec<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub history: History,
    pub parent: Option<usize>,
    pub kind: NodeKind,
}

impl Node {
    pub fn moves(&self) -> &[String] {
        match &self.kind {
            NodeKind::Decision { moves, .. } | NodeKind::Chance { moves, .. } => moves,
            NodeKind::Terminal { .. } => &[],
        }
    }

    pub fn children(&self) -> &[usize] {
        match &self.kind {
            NodeKind::Decision { children, .. } | NodeKind::Chance { children, .. } => children,
            NodeKind::Terminal { .. } => &[],
        }
    }

    pub fn player(&self) -> Option<usize> {
        match self.kind {
            NodeKind::Decision { player, .. } => Some(player),
            _ => None,
        }
    }

    pub fn info_set(&self) -> Option<usize> {
        match self.kind {
            NodeKind::Decision { info_set, .. } => Some(info_set),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfoSet {
    pub id: String,
    pub player: usize,
    pub nodes: Vec<usize>,
    pub moves: Vec<String>,
}

/// A finite game tree with players, chance nodes, information sets and
/// terminal payoffs. Nodes are stored in depth-first order; node 0 is the
/// root.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensiveGame {
    players: Vec<String>,
    tree: Tree,
    nodes: Vec<Node>,
    index: BTreeMap<History, usize>,
    info_sets: Vec<InfoSet>,
}

impl ExtensiveGame {
    pub fn new(players: Vec<String>, tree: Tree) -> Result<Self> {
        Self::with_limits(players, tree, &Limits::default())
    }

    pub fn with_limits(players: Vec<String>, tree: Tree, limits: &Limits) -> Result<Self> {
        check_labels("players", &players)?;
        let mut b = Builder {
            players: &players,
            nodes: Vec::new(),
            set_ids: BTreeMap::new(),
            limits,
        };
        b.add(&tree, Vec::new(), None)?;
        let Builder { nodes, set_ids, .. } = b;
        let mut info_sets: Vec<InfoSet> = Vec::new();
        let mut order: Vec<(usize, String)> = set_ids.into_iter().map(|(id, n)| (n, id)).collect();
        order.sort();
        let mut set_of: BTreeMap<String, usize> = BTreeMap::new();
        for (_, id) in order {
            set_of.insert(id.clone(), info_sets.len());
            info_sets.push(InfoSet {
                id,
                player: 0,
                nodes: Vec::new(),
                moves: Vec::new(),
            });
        }
        let mut nodes = nodes;
        for (n, (node, set_id)) in nodes.iter_mut().enumerate() {
            if let NodeKind::Decision {
                player,
                info_set,
                moves,
                ..
            } = &mut node.kind
            {
                let id = set_id.as_ref().expect("decision nodes carry a set id");
                let s = set_of[id];
                *info_set = s;
                let set = &mut info_sets[s];
                if set.nodes.is_empty() {
                    set.player = *player;
                    set.moves = moves.clone();
                } else if set.player != *player {
                    return Err(Error::InvalidGame(format!(
                        "information set {id:?} mixes players {:?} and {:?}",
                        players[set.player], players[*player]
                    )));
                } else if set.moves != *moves {
                    return Err(Error::InvalidGame(format!(
                        "information set {id:?} has nodes with different moves"
                    )));
                }
                set.nodes.push(n);
            }
        }
        let nodes: Vec<Node> = nodes.into_iter().map(|(n, _)| n).collect();
        for set in &info_sets {
            for &a in &set.nodes {
                for &b in &set.nodes {
                    if a != b && is_prefix(&nodes[a].history, &nodes[b].history) {
                        return Err(Error::InvalidGame(format!(
                            "information set {:?} contains a node and its descendant",
                            set.id
                        )));
                    }
                }
            }
        }
        let index = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.history.clone(), i))
            .collect();
        Ok(ExtensiveGame {
            players,
            tree,
            nodes,
            index,
            info_sets,
        })
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn player_index(&self, name: &str) -> Result<usize> {
        self.players
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownPlayer(name.to_string()))
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, n: usize) -> &Node {
        &self.nodes[n]
    }

    pub fn node_at(&self, history: &[String]) -> Option<usize> {
        self.index.get(history).copied()
    }

    pub fn histories(&self) -> impl Iterator<Item = &History> {
        self.nodes.iter().map(|n| &n.history)
    }

    pub fn info_sets(&self) -> &[InfoSet] {
        &self.info_sets
    }

    pub fn info_set_index(&self, id: &str) -> Option<usize> {
        self.info_sets.iter().position(|s| s.id == id)
    }

    pub fn decision_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&n| self.nodes[n].player().is_some())
    }

    pub fn terminals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&n| matches!(self.nodes[n].kind, NodeKind::Terminal { .. }))
    }

    /// The same game without move `label` at the node reached by `at`.
    pub fn prune_move(&self, at: &[String], label: &str) -> Result<Self> {
        let mut tree = self.tree.clone();
        let mut cur = &mut tree;
        for step in at {
            cur = match cur {
                Tree::Decision { moves, .. } => moves
                    .iter_mut()
                    .find(|b| b.label == *step)
                    .map(|b| &mut b.child),
                Tree::Chance { moves } => moves
                    .iter_mut()
                    .find(|b| b.label == *step)
                    .map(|b| &mut b.child),
                Tree::Terminal { .. } => None,
            }
            .ok_or_else(|| Error::InvalidGame(format!("no node at {}", DisplayHistory(at))))?;
        }
        match cur {
            Tree::Decision { moves, .. } => {
                let before = moves.len();
                moves.retain(|b| b.label != label);
                if moves.len() == before {
                    return Err(Error::InvalidGame(format!(
                        "no move {label:?} at {}",
                        DisplayHistory(at)
                    )));
                }
            }
            _ => {
                return Err(Error::InvalidGame(format!(
                    "{} is not a decision node",
                    DisplayHistory(at)
                )))
            }
        }
        Self::new(self.players.clone(), tree)
    }
}

pub(crate) fn is_prefix(a: &[String], b: &[String]) -> bool {
    a.len() <= b.len() && b[..a.len()] == *a
}

struct Builder<'a> {
    players: &'a [String],
    nodes: Vec<(Node, Option<String>)>,
    /// Information set id -> first node index using it.
    set_ids: BTreeMap<String, usize>,
    limits: &'a Limits,
}

impl Builder<'_> {
    fn add(&mut self, tree: &Tree, history: History, parent: Option<usize>) -> Result<usize> {
        self.limits
            .check_entries("game tree nodes", self.nodes.len() as u128 + 1)?;
        let here = self.nodes.len();
        let at = || DisplayHistory(&history).to_string();
        let placeholder = Node {
            history: history.clone(),
            parent,
            kind: NodeKind::Terminal {
                payoffs: Vec::new(),
            },
        };
        match tree {
            Tree::Terminal { payoffs } => {
                if payoffs.len() != self.players.len() {
                    return Err(Error::Dimension(format!(
                        "terminal {} has {} payoffs for {} players",
                        at(),
                        payoffs.len(),
                        self.players.len()
                    )));
                }
                self.nodes.push((
                    Node {
                        kind: NodeKind::Terminal {
                            payoffs: payoffs.clone(),
                        },
                        ..placeholder
                    },
                    None,
                ));
            }
            Tree::Decision {
                player,
                info_set,
                aware_of,
                moves,
            } => {
                let p = self
                    .players
                    .iter()
                    .position(|x| x == player)
                    .ok_or_else(|| Error::UnknownPlayer(player.clone()))?;
                let labels: Vec<String> = moves.iter().map(|b| b.label.clone()).collect();
                check_labels(&format!("moves at {}", at()), &labels)?;
                let id = info_set.clone().unwrap_or_else(at);
                self.set_ids.entry(id.clone()).or_insert(here);
                self.nodes.push((placeholder, Some(id)));
                let mut children = Vec::new();
                for b in moves {
                    let mut h = history.clone();
                    h.push(b.label.clone());
                    children.push(self.add(&b.child, h, Some(here))?);
                }
                self.nodes[here].0.kind = NodeKind::Decision {
                    player: p,
                    info_set: usize::MAX,
                    moves: labels,
                    virtual_moves: moves.iter().map(|b| b.is_virtual).collect(),
                    children,
                    awareness: aware_of.as_ref().map(|a| a.iter().cloned().collect()),
                };
            }
            Tree::Chance { moves } => {
                let labels: Vec<String> = moves.iter().map(|b| b.label.clone()).collect();
                check_labels(&format!("chance moves at {}", at()), &labels)?;
                let probs: Vec<Rational> = moves.iter().map(|b| b.prob.clone()).collect();
                check_distribution(&probs, || format!("chance node {}", at()))?;
                self.nodes.push((placeholder, None));
                let mut children = Vec::new();
                for b in moves {
                    let mut h = history.clone();
                    h.push(b.label.clone());
                    children.push(self.add(&b.child, h, Some(here))?);
                }
                self.nodes[here].0.kind = NodeKind::Chance {
                    moves: labels,
                    probs,
                    children,
                };
            }
        }
        Ok(here)
    }
}
