//! CSV edge lists: one `user,channel,kind` row per held channel, 1-based,
//! with `kind` either `exclusive` or `shared`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{FormatError, ModelError};
use crate::model::Assignment;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Exclusive,
    Shared,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Edge {
    user: usize,
    channel: usize,
    kind: EdgeKind,
}

/// Reads an edge list for a network of `users` × `channels`.
pub fn read_edges(
    reader: impl Read,
    users: usize,
    channels: usize,
) -> Result<Assignment, FormatError> {
    let mut exclusive = vec![Vec::new(); users];
    let mut shared = vec![Vec::new(); users];
    let mut csv = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    for row in csv.deserialize() {
        let edge: Edge = row?;
        if edge.user == 0 || edge.user > users {
            return Err(ModelError::UserOutOfRange {
                user: edge.user,
                users,
            }
            .into());
        }
        let lists = match edge.kind {
            EdgeKind::Exclusive => &mut exclusive,
            EdgeKind::Shared => &mut shared,
        };
        lists[edge.user - 1].push(edge.channel);
    }
    Ok(Assignment::from_one_based(channels, &exclusive, &shared)?)
}

pub fn parse_edges(text: &str, users: usize, channels: usize) -> Result<Assignment, FormatError> {
    read_edges(text.as_bytes(), users, channels)
}

/// Writes the edge list, ordered by user then channel.
pub fn write_edges(writer: impl Write, a: &Assignment) -> Result<(), FormatError> {
    let mut csv = csv::Writer::from_writer(writer);
    for i in 0..a.users() {
        for channel in a.total(i) {
            let kind = if a.exclusive(i).contains(channel) {
                EdgeKind::Exclusive
            } else {
                EdgeKind::Shared
            };
            csv.serialize(Edge {
                user: i + 1,
                channel: channel + 1,
                kind,
            })?;
        }
    }
    csv.flush()?;
    Ok(())
}

pub fn render_edges(a: &Assignment) -> String {
    let mut out = Vec::new();
    write_edges(&mut out, a).expect("writing to memory cannot fail");
    String::from_utf8(out).expect("csv output is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_three_user_fixture() {
        let a = Assignment::from_one_based(
            6,
            &[vec![1], vec![2], vec![3]],
            &[vec![4, 6], vec![4, 5, 6], vec![5, 6]],
        )
        .unwrap();
        let text = render_edges(&a);
        assert!(text.starts_with("user,channel,kind\n1,1,exclusive\n1,4,shared\n"));
        assert_eq!(parse_edges(&text, 3, 6).unwrap(), a);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(
            parse_edges("user,channel,kind\n1,1,both\n", 1, 1),
            Err(FormatError::Csv(_))
        ));
        assert!(matches!(
            parse_edges("user,channel,kind\n2,1,exclusive\n", 1, 1),
            Err(FormatError::Model(ModelError::UserOutOfRange { .. }))
        ));
        assert!(matches!(
            parse_edges("user,channel,kind\n1,1,shared\n", 2, 1),
            Err(FormatError::Model(ModelError::LoneSharer { .. }))
        ));
        assert!(matches!(
            parse_edges("user,channel,kind\n1,1,exclusive\n2,1,exclusive\n", 2, 1),
            Err(FormatError::Model(ModelError::ExclusiveOverlap { .. }))
        ));
    }

    #[test]
    fn empty_list_is_empty_assignment() {
        let a = parse_edges("user,channel,kind\n", 2, 3).unwrap();
        assert!(a.assigned_channels().is_empty());
    }
}
