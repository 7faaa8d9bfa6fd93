//! Serde adapters for big integers. JSON numbers lose precision past 2^53,
//! so values are written as decimal strings unless they fit in a `u64`.

pub mod ubig_list {
    use std::str::FromStr;

    use dashu::integer::UBig;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Item {
        Num(u64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(v: &[UBig], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|d| match u64::try_from(d) {
            Ok(x) => serde_json::Value::from(x),
            Err(_) => serde_json::Value::from(d.to_string()),
        }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<UBig>, D::Error> {
        Vec::<Item>::deserialize(d)?
            .into_iter()
            .map(|it| match it {
                Item::Num(x) => Ok(UBig::from(x)),
                Item::Str(s) => UBig::from_str(&s).map_err(D::Error::custom),
            })
            .collect()
    }
}

pub mod ubig_str {
    use std::str::FromStr;

    use dashu::integer::UBig;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &UBig, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<UBig, D::Error> {
        let s = String::deserialize(d)?;
        UBig::from_str(&s).map_err(D::Error::custom)
    }
}

pub mod ubig_str_list {
    use std::str::FromStr;

    use dashu::integer::UBig;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[UBig], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<UBig>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|s| UBig::from_str(s).map_err(D::Error::custom)).collect()
    }
}
