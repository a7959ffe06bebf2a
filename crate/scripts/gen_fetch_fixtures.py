"""Write the recorded comment-thread pages used by the fetch tests.

Page 1: 90 threads, every ninth with one reply (100 comments).
Page 2: 100 threads, no replies, no next page token.
"""
import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "crates/core/tests/fixtures"


def comment(cid, text, n):
    return {
        "kind": "youtube#comment",
        "etag": f"etag-{cid}",
        "id": cid,
        "snippet": {
            "videoId": "vid123",
            "textDisplay": text,
            "textOriginal": text,
            "authorDisplayName": f"user{n % 17}",
            "authorChannelUrl": f"http://www.youtube.com/channel/UC{n:04d}",
            "canRate": True,
            "viewerRating": "none",
            "likeCount": n % 13,
            "publishedAt": f"2021-10-{(n % 28) + 1:02d}T12:{n % 60:02d}:00Z",
            "updatedAt": f"2021-10-{(n % 28) + 1:02d}T12:{n % 60:02d}:00Z",
        },
    }


def page(start, threads, reply_every, next_token):
    items = []
    for k in range(threads):
        n = start + k
        thread = {
            "kind": "youtube#commentThread",
            "id": f"t{n:03d}",
            "snippet": {
                "videoId": "vid123",
                "topLevelComment": comment(f"t{n:03d}", f"Comment number {n} about the phone", n),
                "canReply": True,
                "totalReplyCount": 0,
                "isPublic": True,
            },
        }
        if reply_every and k % reply_every == reply_every - 1:
            thread["snippet"]["totalReplyCount"] = 1
            thread["replies"] = {"comments": [comment(f"t{n:03d}.r1", f"Reply to {n}", n + 500)]}
        items.append(thread)
    body = {
        "kind": "youtube#commentThreadListResponse",
        "etag": f"page-{start}",
        "pageInfo": {"totalResults": threads, "resultsPerPage": 100},
        "items": items,
    }
    if next_token:
        body["nextPageToken"] = next_token
    return body


OUT.mkdir(parents=True, exist_ok=True)
(OUT / "threads_page1.json").write_text(json.dumps(page(0, 90, 9, "PAGE2"), indent=1) + "\n")
(OUT / "threads_page2.json").write_text(json.dumps(page(90, 100, 0, None), indent=1) + "\n")
